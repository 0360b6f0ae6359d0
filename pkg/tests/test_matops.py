import numpy as np
import pytest

from qmsemi.constants import rho_multiplier
from qmsemi.matops import (
    Superop,
    divided_difference_multiplier,
    hs_inner,
    identity_superop,
    make_state,
    make_superop,
    matrix_function,
    norm_trace,
    random_hermitian,
    random_state,
    semigroup_apply,
    superop_from_action,
    vec,
)
from qmsemi.models import pauli


def test_hs_inner_identity():
    assert hs_inner(np.eye(3, dtype=complex), np.eye(3)) == pytest.approx(1.0)


def test_hs_inner_pauli_orthogonality():
    assert abs(hs_inner(pauli("z"), pauli("x"))) < 1e-15


def test_hs_inner_matches_entry_sum():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    val = hs_inner(x, x)
    assert val.real == pytest.approx(np.sum(np.abs(x) ** 2) / 4)
    assert val.real >= 0
    assert abs(val.imag) < 1e-14


def test_hs_inner_dim_mismatch():
    with pytest.raises(ValueError):
        hs_inner(np.eye(2), np.eye(3))


def test_matrix_function_exp_of_identity():
    out = matrix_function(np.eye(2, dtype=complex), np.exp)
    assert np.allclose(out, np.e * np.eye(2))


def test_matrix_function_log_diag():
    out = matrix_function(np.diag([np.e, np.e**2]).astype(complex), np.log)
    assert np.allclose(out, np.diag([1.0, 2.0]))


def test_matrix_function_roundtrip():
    rng = np.random.default_rng(1)
    rho = random_state(5, rng)
    back = matrix_function(matrix_function(rho, np.log), np.exp)
    assert np.abs(back - rho).max() < 1e-10


def test_matrix_function_rejects_non_hermitian():
    with pytest.raises(ValueError):
        matrix_function(np.array([[0, 1], [0, 0]], dtype=complex), np.exp)


def test_matrix_function_rejects_log_of_singular():
    with pytest.raises(ValueError):
        matrix_function(np.diag([1.0, 0.0]).astype(complex), np.log)


def test_divided_difference_identity_function():
    rng = np.random.default_rng(2)
    rho = random_state(3, rng)
    y = random_hermitian(3, rng)
    out = divided_difference_multiplier(rho, lambda t: t, y, fprime=lambda t: 1.0)
    assert np.abs(out - y).max() < 1e-12


def test_divided_difference_square():
    rho = np.diag([1.0, 2.0]).astype(complex)
    y = np.ones((2, 2), dtype=complex)
    out = divided_difference_multiplier(rho, lambda t: t * t, y, fprime=lambda t: 2 * t)
    assert np.allclose(out, np.array([[2.0, 3.0], [3.0, 4.0]]))


def test_divided_difference_trace_derivative_law():
    # d/ds tau f(rho + s beta) = tau(f'(rho) beta) up to O(s^2)
    rng = np.random.default_rng(3)
    rho = random_state(3, rng)
    beta = random_hermitian(3, rng)
    f = lambda t: t * np.log(t)
    fprime = matrix_function(rho, lambda t: 1.0 + np.log(t))

    def err(s):
        lhs = norm_trace(matrix_function(rho + s * beta, f)).real
        lhs -= norm_trace(matrix_function(rho, f)).real
        return abs(lhs - s * norm_trace(fprime @ beta).real)

    assert err(1e-5) < 100 * 1e-10
    assert err(1e-6) < err(1e-5) / 20  # quadratic falloff


def test_superop_identity_action():
    s = superop_from_action(lambda x: x, 3)
    assert np.allclose(s.matrix, np.eye(9))
    assert s.hs_selfadjoint and not s.kills_identity


def test_superop_trace_projector():
    s = superop_from_action(lambda x: np.trace(x) / 2 * np.eye(2), 2)
    v1 = vec(np.eye(2)) / np.sqrt(2)
    assert np.allclose(s.matrix, np.outer(v1, v1.conj()))
    assert np.linalg.matrix_rank(s.matrix) == 1


def test_superop_dephasing_spectrum():
    a = pauli("z")
    s = superop_from_action(lambda x: a @ a @ x + x @ a @ a - 2 * a @ x @ a, 2)
    assert np.allclose(np.sort(np.linalg.eigvalsh(s.matrix)), [0, 0, 4, 4])


def test_semigroup_time_zero():
    rng = np.random.default_rng(4)
    a = identity_superop(3) - superop_from_action(lambda x: np.trace(x) / 3 * np.eye(3), 3)
    x = random_hermitian(3, rng)
    assert np.abs(semigroup_apply(a, 0.0, x) - x).max() < 1e-14


def test_semigroup_depolarizing_closed_form():
    rng = np.random.default_rng(5)
    m = 3
    e = superop_from_action(lambda x: np.trace(x) / m * np.eye(m), m)
    a = identity_superop(m) - e
    x = random_hermitian(m, rng)
    for t in (0.3, 1.7):
        expected = np.exp(-t) * x + (1 - np.exp(-t)) * norm_trace(x) * np.eye(m)
        assert np.abs(semigroup_apply(a, t, x) - expected).max() < 1e-12


def test_semigroup_preserves_trace_and_negative_time_rejected():
    rng = np.random.default_rng(6)
    from qmsemi.models import dephasing_generator

    gen = dephasing_generator(2)
    x = random_hermitian(2, rng)
    y = semigroup_apply(gen.superop, 0.8, x)
    assert abs(norm_trace(y) - norm_trace(x)) < 1e-10
    with pytest.raises(ValueError):
        semigroup_apply(gen.superop, -0.1, x)


def test_superop_flags_and_adjointness_symmetry():
    from qmsemi.models import random_lindblad

    rng = np.random.default_rng(7)
    gen = random_lindblad(3, 2, rng)
    a = gen.superop
    assert a.hs_selfadjoint and a.kills_identity
    for _ in range(5):
        x = random_hermitian(3, rng) + 1j * random_hermitian(3, rng)
        y = random_hermitian(3, rng) + 1j * random_hermitian(3, rng)
        assert abs(norm_trace(a.apply(x)).real) < 1e-10
        lhs = hs_inner(x, a.apply(y))
        rhs = np.conj(hs_inner(y, a.apply(x)))
        assert abs(lhs - rhs) < 1e-10


def test_semigroup_composition_law():
    from qmsemi.models import random_lindblad

    rng = np.random.default_rng(8)
    gen = random_lindblad(2, 2, rng)
    x = random_hermitian(2, rng)
    lhs = semigroup_apply(gen.superop, 1.1, x)
    rhs = semigroup_apply(gen.superop, 0.4, semigroup_apply(gen.superop, 0.7, x))
    assert np.abs(lhs - rhs).max() < 1e-9


def test_log_multiplier_inverse_identity():
    # J_log then the two-sided [rho] multiplier recovers the perturbation
    rng = np.random.default_rng(9)
    rho = random_state(4, rng)
    delta = random_hermitian(4, rng)
    j = divided_difference_multiplier(rho, np.log, delta, fprime=lambda s: 1.0 / s)
    back = rho_multiplier(rho, j)
    assert np.abs(back - delta).max() < 1e-8


def test_make_state_clamps_and_normalizes():
    mat = np.diag([1.0, -1e-13, 2.0]).astype(complex)
    rho = make_state(mat)
    assert abs(norm_trace(rho) - 1.0) < 1e-12
    assert np.linalg.eigvalsh(rho).min() >= 0
    with pytest.raises(ValueError):
        make_state(np.diag([1.0, -0.5]).astype(complex))


def test_make_superop_rejects_bad_shape():
    with pytest.raises(ValueError):
        make_superop(np.eye(5), 2)
