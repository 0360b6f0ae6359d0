"""Dense Hermitian linear algebra over the matrix algebra M_m with normalized trace.

Conventions used throughout the package:

* tau(x) = tr(x) / m is the tracial state; all inner products, norms and
  entropies are taken with respect to tau.  States are positive matrices
  with tau(rho) = 1, i.e. ordinary matrix trace equal to m.
* Operators are plain complex ndarrays of shape (m, m).
* Linear maps on M_m ("superoperators") are stored as m^2 x m^2 matrices
  acting on the row-major vectorization vec(x) = x.reshape(-1).  Because
  the tau-orthonormal basis sqrt(m) * |i><j| differs from the matrix
  units only by a global scale, a map is self-adjoint for the tau inner
  product exactly when its matrix is Hermitian.
* All matrix functions go through the eigendecomposition; dimensions stay
  small (m <= ~16) so spectral accuracy beats any scaling/squaring scheme.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

__all__ = [
    "norm_trace",
    "hs_inner",
    "hs_norm",
    "dagger",
    "is_hermitian",
    "matrix_function",
    "divided_difference_multiplier",
    "vec",
    "unvec",
    "matrix_units",
    "tau_orthonormal_basis",
    "hermitian_basis",
    "Superop",
    "make_superop",
    "superop_from_action",
    "identity_superop",
    "zero_superop",
    "semigroup_apply",
    "standard_choi",
    "tensor_sum_generator",
    "tensor_superop",
    "nullspace_basis",
    "subspace_gap",
    "make_state",
    "random_hermitian",
    "random_state",
]

HERMITIAN_TOL = 1e-12
FLAG_TOL = 1e-10


def norm_trace(x: np.ndarray) -> complex:
    """Normalized trace tau(x) = tr(x)/m."""
    return np.trace(x) / x.shape[0]


def hs_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Inner product tau(x* y).  Conjugate linear in the first argument."""
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return np.trace(x.conj().T @ y) / x.shape[0]


def hs_norm(x: np.ndarray) -> float:
    """L2 norm sqrt(tau(x* x))."""
    return np.sqrt(max(hs_inner(x, x).real, 0.0))


def dagger(x: np.ndarray) -> np.ndarray:
    return x.conj().T


def is_hermitian(x: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    scale = max(np.abs(x).max(), 1.0) if x.size else 1.0
    return np.abs(x - x.conj().T).max() <= tol * scale


def matrix_function(x: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Raises if x is not Hermitian or if f is undefined (non-finite) at an
    eigenvalue.  The result is Hermitian whenever f is real on the spectrum.
    """
    if not is_hermitian(x):
        raise ValueError("matrix_function requires a Hermitian argument")
    w, u = np.linalg.eigh(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        fw = np.asarray(f(w), dtype=complex)
    if not np.all(np.isfinite(fw)):
        raise ValueError("function undefined on part of the spectrum")
    return (u * fw) @ u.conj().T


def _numeric_derivative(f: Callable, s: float) -> float:
    h = 1e-6 * max(abs(s), 1.0)
    return (f(s + h) - f(s - h)) / (2.0 * h)


def divided_difference_multiplier(
    rho: np.ndarray,
    f: Callable,
    y: np.ndarray,
    fprime: Callable | None = None,
) -> np.ndarray:
    """First-order operator derivative of f at rho, applied to y.

    In the eigenbasis rho = sum_k r_k e_k this is the Schur multiplier

        J_f(y) = sum_{k,l} Df(r_k, r_l) e_k y e_l,

    with Df(s, t) = (f(s) - f(t)) / (s - t) away from the diagonal and
    f'((s+t)/2) when |s - t| <= 1e-9 * max(|s|, |t|, 1); the midpoint rule
    removes the 0/0 singularity with O(gap) error.
    """
    if not is_hermitian(rho):
        raise ValueError("divided_difference_multiplier requires Hermitian rho")
    if rho.shape != y.shape:
        raise ValueError("dimension mismatch")
    w, u = np.linalg.eigh(rho)
    if fprime is None:
        fprime = lambda s: _numeric_derivative(f, s)
    n = w.size
    fw = np.array([f(t) for t in w], dtype=float)
    d = np.empty((n, n))
    for k in range(n):
        for l in range(n):
            gap = abs(w[k] - w[l])
            if gap <= 1e-9 * max(abs(w[k]), abs(w[l]), 1.0):
                d[k, l] = fprime(0.5 * (w[k] + w[l]))
            else:
                d[k, l] = (fw[k] - fw[l]) / (w[k] - w[l])
    ytil = u.conj().T @ y @ u
    return u @ (d * ytil) @ u.conj().T


# ---------------------------------------------------------------------------
# vectorization and bases
# ---------------------------------------------------------------------------

def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=complex).reshape(-1)


def unvec(v: np.ndarray, m: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(m, m)


def matrix_units(m: int) -> np.ndarray:
    """All |i><j| in lexicographic (row-major) order, shape (m*m, m, m)."""
    out = np.zeros((m * m, m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            out[i * m + j, i, j] = 1.0
    return out


def tau_orthonormal_basis(m: int) -> np.ndarray:
    """Basis sqrt(m)*|i><j|, orthonormal for the tau inner product."""
    return np.sqrt(m) * matrix_units(m)


def hermitian_basis(m: int) -> np.ndarray:
    """Hermitian basis of M_m, orthonormal for the *unnormalized* trace.

    Generalized Gell-Mann construction: the scaled identity, the symmetric
    and antisymmetric off-diagonal pairs, and the diagonal ladder.
    """
    mats = [np.eye(m, dtype=complex) / np.sqrt(m)]
    for i in range(m):
        for j in range(i + 1, m):
            s = np.zeros((m, m), dtype=complex)
            s[i, j] = s[j, i] = 1.0 / np.sqrt(2.0)
            mats.append(s)
            a = np.zeros((m, m), dtype=complex)
            a[i, j] = -1j / np.sqrt(2.0)
            a[j, i] = 1j / np.sqrt(2.0)
            mats.append(a)
    for k in range(1, m):
        d = np.zeros(m, dtype=complex)
        d[:k] = 1.0
        d[k] = -k
        mats.append(np.diag(d) / np.sqrt(k * (k + 1)))
    return np.array(mats)


# ---------------------------------------------------------------------------
# superoperators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Superop:
    """A linear map on M_m as an m^2 x m^2 matrix over row-major vec.

    Validity flags are computed at construction time:

    * ``hs_selfadjoint`` -- the matrix is Hermitian (map self-adjoint for tau);
    * ``kills_identity`` -- the map annihilates 1;
    * ``cp_semigroup``   -- tri-state "verified"/"failed"/"unchecked", set by
      generator validation.
    """

    dim: int
    matrix: np.ndarray
    hs_selfadjoint: bool
    kills_identity: bool
    cp_semigroup: str = "unchecked"

    def apply(self, x: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(x), self.dim)

    @cached_property
    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigendecomposition of the (Hermitian) superoperator matrix."""
        if not self.hs_selfadjoint:
            raise ValueError("spectral calculus requires a self-adjoint map")
        return np.linalg.eigh(self.matrix)

    @cached_property
    def norm(self) -> float:
        """Operator norm on L2(tau)."""
        if self.hs_selfadjoint:
            w, _ = self.eig
            return float(np.abs(w).max()) if w.size else 0.0
        return float(np.linalg.norm(self.matrix, 2))

    def with_cp_flag(self, flag: str) -> "Superop":
        return dataclasses.replace(self, cp_semigroup=flag)

    def __add__(self, other: "Superop") -> "Superop":
        return make_superop(self.matrix + other.matrix, self.dim)

    def __sub__(self, other: "Superop") -> "Superop":
        return make_superop(self.matrix - other.matrix, self.dim)

    def __rmul__(self, c: float) -> "Superop":
        return make_superop(c * self.matrix, self.dim)

    def __matmul__(self, other: "Superop") -> "Superop":
        return make_superop(self.matrix @ other.matrix, self.dim)


def make_superop(matrix: np.ndarray, dim: int | None = None) -> Superop:
    matrix = np.asarray(matrix, dtype=complex)
    if dim is None:
        dim = int(round(np.sqrt(matrix.shape[0])))
    if matrix.shape != (dim * dim, dim * dim):
        raise ValueError("superoperator matrix must be m^2 x m^2")
    scale = max(np.abs(matrix).max(), 1.0)
    sa = np.abs(matrix - matrix.conj().T).max() <= FLAG_TOL * scale
    one = vec(np.eye(dim))
    kills = np.linalg.norm(matrix @ one) / np.sqrt(dim) <= FLAG_TOL * scale
    return Superop(dim=dim, matrix=matrix, hs_selfadjoint=sa, kills_identity=kills)


def superop_from_action(action: Callable[[np.ndarray], np.ndarray], m: int) -> Superop:
    """Matrix of a linear map from its action on the matrix units."""
    cols = np.empty((m * m, m * m), dtype=complex)
    units = matrix_units(m)
    for a in range(m * m):
        cols[:, a] = vec(action(units[a]))
    return make_superop(cols, m)


def identity_superop(m: int) -> Superop:
    return make_superop(np.eye(m * m, dtype=complex), m)


def zero_superop(m: int) -> Superop:
    return make_superop(np.zeros((m * m, m * m), dtype=complex), m)


def semigroup_apply(a: Superop, t: float, x: np.ndarray) -> np.ndarray:
    """Evaluate e^{-tA}(x) by spectral calculus of the superoperator."""
    if t < 0:
        raise ValueError("semigroup time must be nonnegative")
    w, v = a.eig
    coeff = v.conj().T @ vec(x)
    return unvec(v @ (np.exp(-t * w) * coeff), a.dim)


def standard_choi(a: Superop) -> np.ndarray:
    """Matrix-unit Choi block matrix sum_ij |i><j| (x) A(|i><j|)."""
    m = a.dim
    return a.matrix.reshape(m, m, m, m).transpose(2, 0, 3, 1).reshape(m * m, m * m)


def _apply_on_factor(s_matrix: np.ndarray, x: np.ndarray, m1: int, m2: int, first: bool) -> np.ndarray:
    xr = x.reshape(m1, m2, m1, m2)
    if first:
        xr = xr.transpose(0, 2, 1, 3).reshape(m1 * m1, m2 * m2)
        yr = (s_matrix @ xr).reshape(m1, m1, m2, m2).transpose(0, 2, 1, 3)
    else:
        xr = xr.transpose(1, 3, 0, 2).reshape(m2 * m2, m1 * m1)
        yr = (s_matrix @ xr).reshape(m2, m2, m1, m1).transpose(2, 0, 3, 1)
    return yr.reshape(m1 * m2, m1 * m2)


def tensor_sum_generator(a1: Superop, a2: Superop) -> Superop:
    """Generator A1 (x) id + id (x) A2 on M_{m1 m2}."""
    m1, m2 = a1.dim, a2.dim
    return superop_from_action(
        lambda x: _apply_on_factor(a1.matrix, x, m1, m2, True)
        + _apply_on_factor(a2.matrix, x, m1, m2, False),
        m1 * m2,
    )


def tensor_superop(s1: Superop, s2: Superop) -> Superop:
    """The map S1 (x) S2 on M_{m1 m2} (used for tensored expectations)."""
    m1, m2 = s1.dim, s2.dim
    return superop_from_action(
        lambda x: _apply_on_factor(
            s2.matrix, _apply_on_factor(s1.matrix, x, m1, m2, True), m1, m2, False
        ),
        m1 * m2,
    )


# ---------------------------------------------------------------------------
# subspace utilities
# ---------------------------------------------------------------------------

def nullspace_basis(k: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the nullspace, scale-aware cutoff."""
    _, s, vh = np.linalg.svd(k)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return np.eye(k.shape[1], dtype=complex)
    keep = s <= rtol * smax
    ns = vh[len(s) - keep.sum():].conj().T if keep.any() else np.zeros((k.shape[1], 0), dtype=complex)
    return ns


def subspace_gap(b1: np.ndarray, b2: np.ndarray) -> float:
    """Largest principal-angle sine between two subspaces (column spans)."""
    q1, _ = np.linalg.qr(b1)
    q2, _ = np.linalg.qr(b2)
    r1 = np.linalg.norm(q2 - q1 @ (q1.conj().T @ q2), 2) if q2.size else 0.0
    r2 = np.linalg.norm(q1 - q2 @ (q2.conj().T @ q1), 2) if q1.size else 0.0
    return max(r1, r2)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

def make_state(mat: np.ndarray) -> np.ndarray:
    """Validate and normalize a state: Hermitian, PSD up to -1e-12, tau = 1."""
    mat = np.asarray(mat, dtype=complex)
    if not is_hermitian(mat):
        raise ValueError("a state must be Hermitian")
    w, u = np.linalg.eigh(mat)
    scale = max(np.abs(w).max(), 1.0)
    if w.min() < -1e-12 * scale:
        raise ValueError(f"state has negative eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    tot = w.sum()
    if tot <= 0:
        raise ValueError("state has zero trace")
    w *= mat.shape[0] / tot
    return (u * w) @ u.conj().T


def random_hermitian(m: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return scale * (g + g.conj().T) / 2.0


def random_state(m: int, rng: np.random.Generator, spread: float = 1.0) -> np.ndarray:
    """Random invertible state m*exp(H)/tr(exp(H)) with H a scaled GUE draw."""
    h = random_hermitian(m, rng, spread)
    e = matrix_function(h, np.exp)
    return m * e / np.trace(e).real
