import numpy as np
import pytest

from qmsemi.algebra import scalar_algebra
from qmsemi.generator import (
    JumpSet,
    derivation,
    gradient_form,
    gradient_form_ie,
    gradient_form_weak,
    jump_set,
    lindblad,
    spectral_gap,
    validate_generator,
)
from qmsemi.matops import (
    identity_superop,
    make_superop,
    norm_trace,
    nullspace_basis,
    random_hermitian,
    semigroup_apply,
    subspace_gap,
)
from qmsemi.models import dephasing_generator, depolarizing_generator, pauli, random_lindblad


def test_lindblad_dephasing_action():
    gen = dephasing_generator(2)
    assert np.abs(gen.superop.apply(pauli("x")) - 4 * pauli("x")).max() < 1e-12
    assert np.abs(gen.superop.apply(pauli("z"))).max() < 1e-12
    assert np.abs(gen.superop.apply(np.eye(2))).max() < 1e-12


def test_lindblad_trivial_jump_sets():
    empty = lindblad(jump_set([], m=3))
    assert np.abs(empty.superop.matrix).max() < 1e-12
    assert empty.fixed_algebra.size == 9
    ident = lindblad(jump_set(np.eye(3, dtype=complex)))
    assert np.abs(ident.superop.matrix).max() < 1e-12


def test_jump_set_rejects_non_hermitian():
    with pytest.raises(ValueError):
        JumpSet(dim=2, jumps=np.array([[[0, 1], [0, 0]]], dtype=complex))


def test_derivation_values_and_leibniz():
    gen = dephasing_generator(2)
    assert np.abs(derivation(gen.jumps, np.eye(2, dtype=complex))).max() < 1e-14
    d = derivation(gen.jumps, pauli("x"))
    assert np.abs(d[0] - 2j * pauli("y")).max() < 1e-12
    rng = np.random.default_rng(0)
    for _ in range(5):
        x = random_hermitian(2, rng) + 1j * random_hermitian(2, rng)
        y = random_hermitian(2, rng) + 1j * random_hermitian(2, rng)
        lhs = derivation(gen.jumps, x @ y)
        rhs = derivation(gen.jumps, x) @ y + np.einsum(
            "ij,kjl->kil", x, derivation(gen.jumps, y)
        )
        assert np.abs(lhs - rhs).max() < 1e-12 * max(1.0, np.abs(rhs).max())


def test_derivation_star_relation():
    rng = np.random.default_rng(1)
    gen = random_lindblad(3, 2, rng)
    x = random_hermitian(3, rng) + 1j * random_hermitian(3, rng)
    lhs = derivation(gen.jumps, x.conj().T)
    rhs = -np.transpose(derivation(gen.jumps, x).conj(), (0, 2, 1))
    assert np.abs(lhs - rhs).max() < 1e-12


def test_gradient_form_values():
    gen = dephasing_generator(2)
    assert np.abs(gradient_form(gen.jumps, np.eye(2), np.eye(2))).max() < 1e-14
    g = gradient_form(gen.jumps, pauli("x"), pauli("x"))
    assert np.abs(g - 4 * np.eye(2)).max() < 1e-12


def test_gradient_form_weak_consistency():
    # tau(Gamma(x,y) z) agrees with the weak definition through the generator
    rng = np.random.default_rng(2)
    gen = random_lindblad(3, 2, rng)
    a = gen.superop
    for _ in range(10):
        x = random_hermitian(3, rng) + 1j * random_hermitian(3, rng)
        y = random_hermitian(3, rng) + 1j * random_hermitian(3, rng)
        z = random_hermitian(3, rng) + 1j * random_hermitian(3, rng)
        lhs = norm_trace(gradient_form(gen.jumps, x, y) @ z)
        rhs = 0.5 * (
            norm_trace(a.apply(x).conj().T @ y @ z)
            + norm_trace(x.conj().T @ a.apply(y) @ z)
            - norm_trace(x.conj().T @ y @ a.apply(z))
        )
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))
        weak = gradient_form_weak(a, x, y)
        assert np.abs(weak - gradient_form(gen.jumps, x, y)).max() < 1e-10


def test_gradient_form_ie_cases():
    n = scalar_algebra(3)
    rng = np.random.default_rng(3)
    assert np.abs(gradient_form_ie(n, np.eye(3), np.eye(3))).max() < 1e-14
    x = random_hermitian(3, rng)
    x -= norm_trace(x).real * np.eye(3)
    expected = 0.5 * (x @ x + norm_trace(x @ x) * np.eye(3))
    assert np.abs(gradient_form_ie(n, x, x) - expected).max() < 1e-12
    for _ in range(100):
        y = random_hermitian(3, rng) + 1j * random_hermitian(3, rng)
        g = gradient_form_ie(n, y, y)
        assert np.linalg.eigvalsh((g + g.conj().T) / 2).min() >= -1e-10


def test_validate_generator_reports():
    gen = dephasing_generator(2)
    report = validate_generator(gen.superop)
    assert report["all_passed"]
    bad = -1.0 * (identity_superop(2) - scalar_algebra(2).expectation)
    report = validate_generator(bad)
    assert not report["psd"]
    # a Hermitian superop without Lindblad structure: flagged, not asserted
    rng = np.random.default_rng(4)
    h = random_hermitian(4, rng)
    rogue = make_superop(h, 2)
    validate_generator(rogue)


def test_spectral_gap_values():
    assert spectral_gap(identity_superop(2) - scalar_algebra(2).expectation) == pytest.approx(1.0)
    assert spectral_gap(dephasing_generator(2).superop) == pytest.approx(4.0)
    assert spectral_gap(make_superop(np.zeros((4, 4)), 2)) == 0.0


def test_dirichlet_identity():
    rng = np.random.default_rng(5)
    gen = random_lindblad(3, 2, rng)
    for _ in range(10):
        x = random_hermitian(3, rng) + 1j * random_hermitian(3, rng)
        y = random_hermitian(3, rng) + 1j * random_hermitian(3, rng)
        lhs = norm_trace(x.conj().T @ gen.superop.apply(y))
        rhs = norm_trace(gradient_form(gen.jumps, x, y))
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


def test_fixed_algebra_is_nullspace():
    rng = np.random.default_rng(6)
    for gen in (dephasing_generator(2), random_lindblad(3, 2, rng)):
        ns = nullspace_basis(gen.superop.matrix, rtol=1e-10)
        fix = np.column_stack([b.reshape(-1) for b in gen.fixed_algebra.basis])
        assert subspace_gap(ns, fix) < 1e-8


def test_gradient_vanishes_exactly_on_fixed_algebra():
    rng = np.random.default_rng(7)
    gen = random_lindblad(4, 2, rng)
    for b in gen.fixed_algebra.basis:
        assert np.abs(gradient_form(gen.jumps, b, b)).max() < 1e-10
    # and conversely a random non-fixed element has positive energy
    x = random_hermitian(4, rng)
    x -= gen.fixed_algebra.project(x)
    if np.abs(x).max() > 1e-6:
        g = gradient_form(gen.jumps, x, x)
        assert np.linalg.eigvalsh((g + g.conj().T) / 2).max() > 1e-8


def test_semigroup_commutes_with_expectation():
    rng = np.random.default_rng(8)
    for gen in (dephasing_generator(2), depolarizing_generator(3),
                random_lindblad(3, 2, rng)):
        e = gen.e_fix
        w, v = gen.superop.eig
        for t in (0.5, 2.0):
            t_mat = (v * np.exp(-t * w)) @ v.conj().T
            assert np.abs(t_mat @ e.matrix - e.matrix).max() < 1e-9
            assert np.abs(e.matrix @ t_mat - e.matrix).max() < 1e-9


def test_lindblad_superop_is_psd():
    rng = np.random.default_rng(9)
    for _ in range(5):
        gen = random_lindblad(3, 2, rng)
        w, _ = gen.superop.eig
        assert w.min() >= -1e-10 * max(1.0, np.abs(w).max())
