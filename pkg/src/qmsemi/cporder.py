"""Completely positive order of gradient forms via Hermitian kernels.

A sesquilinear form Gamma with values in M_m is encoded on a tau-orthonormal
operator basis {e_a} as the Hermitian kernel

    Q[(a,u),(b,v)] = <u, Gamma(e_a, e_b) v>,

so that sum_{ij} z_i* Gamma(x_i, x_j) z_j >= 0 for all finite families
(x_i in span{e_a}, z_i in C^m) is exactly Q >= 0.  The gradient condition
"lambda * Gamma_{I-E} <= Gamma_A in cp order" becomes an eigenvalue pencil,
decided by bisection on the smallest eigenvalue of Q_A - lambda Q_{I-E}.
Matrix-amplified agreement is delegated to a sampling oracle in the tests.

The module also computes the module-basis Choi matrix whose operator norm is
the L1 -> Linf cb-norm of an N-bimodule map, and the derived return time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import ModuleBasis, SubAlgebra, module_basis
from .generator import LindbladGenerator
from .matops import (
    Superop,
    identity_superop,
    semigroup_apply,
    tau_orthonormal_basis,
)

__all__ = [
    "FormKernel",
    "GammaECertificate",
    "form_kernel",
    "kernel_from_jumps",
    "kernel_from_superop",
    "kernel_ie",
    "cp_order_holds",
    "best_lambda",
    "gamma_e_constant",
    "choi_matrix",
    "cb_norm_1_to_inf",
    "return_time",
    "l2_to_linf_cb_sq",
]

PSD_RTOL = 1e-9


@dataclass(frozen=True)
class FormKernel:
    """Hermitian kernel of an operator-valued sesquilinear form."""

    dim: int                 # matrix size m (the "vector" slots)
    basis_size: int          # number of operator basis elements
    q: np.ndarray            # (basis_size*dim, basis_size*dim)

    @property
    def size(self) -> int:
        return self.basis_size * self.dim


def _symmetrize(q: np.ndarray) -> np.ndarray:
    return (q + q.conj().T) / 2.0


def form_kernel(
    form: Callable[[np.ndarray, np.ndarray], np.ndarray],
    m: int,
    basis: np.ndarray | None = None,
    check: bool = True,
) -> FormKernel:
    """Kernel of a form by evaluating it on all operator basis pairs.

    ``basis`` defaults to the full tau-orthonormal basis of M_m; a basis of a
    subalgebra restricts the form (used for commutative generators).  A quick
    randomized probe rejects forms that are not sesquilinear.
    """
    if basis is None:
        basis = tau_orthonormal_basis(m)
    k = basis.shape[0]
    if check and k >= 2:
        rng = np.random.default_rng(7)
        c1, c2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        lhs = form(c1 * basis[0] + c2 * basis[1], basis[1])
        rhs = np.conj(c1) * form(basis[0], basis[1]) + np.conj(c2) * form(basis[1], basis[1])
        scale = max(np.abs(rhs).max(), 1.0)
        if np.abs(lhs - rhs).max() > 1e-8 * scale:
            raise ValueError("form is not sesquilinear")
    q = np.empty((k, m, k, m), dtype=complex)
    for a in range(k):
        for b in range(k):
            q[a, :, b, :] = form(basis[a], basis[b])
    return FormKernel(dim=m, basis_size=k, q=_symmetrize(q.reshape(k * m, k * m)))


def kernel_from_jumps(jumps_arr: np.ndarray) -> FormKernel:
    """Kernel of Gamma(x,y) = sum_k [a_k,x]*[a_k,y] (vectorized)."""
    a = np.asarray(jumps_arr, dtype=complex)
    m = a.shape[-1]
    basis = tau_orthonormal_basis(m)
    # commutators [a_k, e_b] for all jumps and basis elements
    c = np.einsum("kij,bjl->kbil", a, basis) - np.einsum("bij,kjl->kbil", basis, a)
    q = np.einsum("kaiu,kbiv->aubv", c.conj(), c)
    k = basis.shape[0]
    return FormKernel(dim=m, basis_size=k, q=_symmetrize(q.reshape(k * m, k * m)))


def kernel_from_superop(a: Superop, basis: np.ndarray | None = None) -> FormKernel:
    """Kernel of the weak-form gradient of a self-adjoint generator A:

        Gamma_A(x, y) = (A(x)* y + x* A(y) - A(x* y)) / 2.
    """
    m = a.dim
    if basis is None:
        basis = tau_orthonormal_basis(m)
    k = basis.shape[0]
    ab = np.array([a.apply(b) for b in basis])
    prod = np.einsum("aji,bjl->abil", basis.conj(), basis)  # e_a* e_b
    aprod = np.einsum("pq,abq->abp", a.matrix, prod.reshape(k, k, m * m))
    aprod = aprod.reshape(k, k, m, m)
    q = 0.5 * (
        np.einsum("aji,bjl->abil", ab.conj(), basis)
        + np.einsum("aji,bjl->abil", basis.conj(), ab)
        - aprod
    )
    q = q.transpose(0, 2, 1, 3).reshape(k * m, k * m)
    return FormKernel(dim=m, basis_size=k, q=_symmetrize(q))


def kernel_ie(n: SubAlgebra, basis: np.ndarray | None = None) -> FormKernel:
    """Kernel of Gamma_{I-E_N}."""
    a = identity_superop(n.dim) - n.expectation
    return kernel_from_superop(a, basis=basis)


def _psd_floor(w: np.ndarray) -> float:
    return PSD_RTOL * max(np.abs(w).max() if w.size else 0.0, 1.0)


def cp_order_holds(q_small: FormKernel, q_big: FormKernel, lam: float) -> bool:
    """True iff Q_big - lam * Q_small is PSD up to a scale-relative floor."""
    if q_small.size != q_big.size or q_small.dim != q_big.dim:
        raise ValueError("kernel dimension mismatch")
    w = np.linalg.eigvalsh(q_big.q - lam * q_small.q)
    return bool(w.min() >= -_psd_floor(w))


@dataclass(frozen=True)
class GammaECertificate:
    """Two-sided bracket for max{lambda : lambda Q_small <= Q_big}."""

    lambda_star: float
    method: str
    tolerance: float
    witness: np.ndarray | None = None
    checks: tuple = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "lambda_star": float(self.lambda_star),
            "method": self.method,
            "tolerance": float(self.tolerance),
            "checks": [
                {"lambda": float(l), "min_eig": float(e)} for l, e in self.checks
            ],
        }


def best_lambda(
    q_small: FormKernel, q_big: FormKernel, tol: float = 1e-8
) -> GammaECertificate:
    """Largest lambda with lambda * Q_small <= Q_big, by eigen-pencil bisection.

    Robust to rank deficiency of Q_small: the search interval is capped at
    ||Q_big|| / sigma_min^+(Q_small).  Returns 0 with a witness eigenvector
    when Q_big itself fails to be PSD on the required range.
    """
    ws = np.linalg.eigvalsh(q_small.q)
    pos = ws[ws > PSD_RTOL * max(np.abs(ws).max(), 1.0)]
    if pos.size == 0:
        raise ValueError("Q_small vanishes; no pencil to solve")
    wb = np.linalg.eigvalsh(q_big.q)
    upper = max(np.abs(wb).max() / pos.min(), tol)

    def min_eig(lam: float) -> tuple[float, np.ndarray]:
        w, v = np.linalg.eigh(q_big.q - lam * q_small.q)
        return w[0] + _psd_floor(w), v[:, 0]

    checks = []
    e0, v0 = min_eig(0.0)
    checks.append((0.0, e0))
    if e0 < 0.0:
        return GammaECertificate(0.0, "pencil-bisection", tol, v0, tuple(checks))
    e_up, v_up = min_eig(upper)
    checks.append((upper, e_up))
    if e_up >= 0.0:
        return GammaECertificate(upper, "pencil-bisection", tol, None, tuple(checks))
    lo, hi, wit = 0.0, upper, v_up
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        e_mid, v_mid = min_eig(mid)
        if e_mid >= 0.0:
            lo = mid
        else:
            hi, wit = mid, v_mid
    checks.append((lo, min_eig(lo)[0]))
    checks.append((hi, min_eig(hi)[0]))
    return GammaECertificate(lo, "pencil-bisection", tol, wit, tuple(checks))


def gamma_e_constant(gen: LindbladGenerator) -> GammaECertificate:
    """Certified gradient-condition constant of a Lindblad generator.

    Compares the kernel of Gamma_{I-E_fix} against the kernel of the jump
    gradient form.  A generator with trivial dynamics (fixed algebra all of
    M_m) gets lambda_star = 0.
    """
    q_small = kernel_ie(gen.fixed_algebra)
    ws = np.linalg.eigvalsh(q_small.q)
    if ws.max() <= PSD_RTOL:
        return GammaECertificate(0.0, "pencil-bisection", 1e-8, None, ())
    q_big = kernel_from_jumps(gen.jumps.jumps)
    return best_lambda(q_small, q_big)


# ---------------------------------------------------------------------------
# module-basis Choi matrix, cb-norms, return time
# ---------------------------------------------------------------------------

def _check_bimodular(
    apply_t: Callable[[np.ndarray], np.ndarray],
    n: SubAlgebra,
    rng_seed: int = 11,
    samples: int = 6,
) -> None:
    rng = np.random.default_rng(rng_seed)
    m = n.dim
    k = n.size
    for _ in range(samples):
        c1 = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        c2 = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        n1 = np.tensordot(c1, n.basis, axes=(0, 0))
        n2 = np.tensordot(c2, n.basis, axes=(0, 0))
        x = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        lhs = apply_t(n1 @ x @ n2)
        rhs = n1 @ apply_t(x) @ n2
        scale = max(np.abs(rhs).max(), 1.0)
        if np.abs(lhs - rhs).max() > 1e-8 * scale:
            raise ValueError("map is not an N-bimodule map")


def choi_matrix(
    t: Superop | Callable[[np.ndarray], np.ndarray],
    basis: ModuleBasis,
    check: bool = True,
) -> np.ndarray:
    """Block matrix sum_{ij} |i><j| (x) T(xi_i* xi_j) over a module basis.

    Its operator norm is the L1 -> Linf cb-norm of the N-bimodule map T.
    """
    apply_t = t.apply if isinstance(t, Superop) else t
    if check:
        _check_bimodular(apply_t, basis.algebra)
    xis = basis.xis
    k = xis.shape[0]
    m = basis.algebra.dim
    chi = np.empty((k, m, k, m), dtype=complex)
    for i in range(k):
        for j in range(k):
            chi[i, :, j, :] = apply_t(xis[i].conj().T @ xis[j])
    return chi.reshape(k * m, k * m)


def cb_norm_1_to_inf(
    t: Superop | Callable[[np.ndarray], np.ndarray],
    basis: ModuleBasis,
    check: bool = False,
) -> float:
    chi = choi_matrix(t, basis, check=check)
    return float(np.linalg.norm(chi, 2))


def return_time(
    a: Superop,
    n: SubAlgebra,
    threshold: float = 0.5,
    tol: float = 1e-6,
    basis: ModuleBasis | None = None,
) -> float:
    """Smallest t with ||chi_{T_t - E}|| <= threshold, by bisection in t.

    The Choi norm of T_t - E is the L1 -> Linf cb distance to equilibrium;
    it decreases in t, so bisection is justified.  Returns math.inf when the
    threshold is not reached by t = 1e4 / gap, and raises if the generator
    has no spectral gap (no convergence to E).
    """
    from .generator import spectral_gap

    gap = spectral_gap(a)
    if gap <= 0.0:
        raise ValueError("generator has no spectral gap; no convergence to E")
    if basis is None:
        basis = module_basis(n)
    e = n.expectation

    def g(t: float) -> float:
        def diff(x):
            return semigroup_apply(a, t, x) - e.apply(x)

        return cb_norm_1_to_inf(diff, basis) - threshold

    if g(0.0) <= 0.0:
        return 0.0
    t_cap = 1e4 / gap
    hi = 1.0 / gap
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > t_cap:
            return math.inf
    lo = 0.0 if hi <= 2.0 / gap else hi / 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def l2_to_linf_cb_sq(s: Superop) -> float:
    """Squared cb-norm of a map L2(tau) -> M for the self-dual structure:

        ||S||^2 = || sum_i S(e_i) (x) conj(S(e_i)) ||

    over any tau-orthonormal basis {e_i}.  For S = T_t - E of an ergodic
    self-adjoint semigroup this equals ||chi_{T_{2t} - E}|| exactly, which is
    the splitting identity relating the distance to equilibrium at time 2t
    to the squared L2 -> Linf norm at time t.
    """
    m = s.dim
    basis = tau_orthonormal_basis(m)
    acc = np.zeros((m * m, m * m), dtype=complex)
    for e in basis:
        se = s.apply(e)
        acc += np.kron(se, se.conj())
    return float(np.linalg.norm(acc, 2))
