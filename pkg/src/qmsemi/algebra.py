"""Subalgebras of M_m: commutants, conditional expectations, module bases.

A *-subalgebra N of M_m is represented by a tau-orthonormal basis.  The
trace-preserving conditional expectation onto N is the orthogonal projection
for the tau inner product, E(x) = sum_i b_i tau(b_i* x); for a von Neumann
subalgebra this projection is automatically unital, positive and N-bimodular.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .matops import (
    Superop,
    hs_inner,
    hs_norm,
    make_superop,
    matrix_function,
    matrix_units,
    nullspace_basis,
    unvec,
    vec,
)

__all__ = [
    "SubAlgebra",
    "ModuleBasis",
    "commutant",
    "conditional_expectation",
    "module_basis",
    "full_algebra",
    "scalar_algebra",
    "diagonal_algebra",
]


@dataclass(frozen=True)
class SubAlgebra:
    """A *-subalgebra of M_m given by a tau-orthonormal basis."""

    dim: int
    basis: np.ndarray  # shape (k, m, m)
    contains_identity: bool

    @property
    def size(self) -> int:
        return self.basis.shape[0]

    def project(self, x: np.ndarray) -> np.ndarray:
        """HS-orthogonal projection of x onto the span of the basis."""
        coeffs = np.tensordot(self.basis.conj(), x, axes=([1, 2], [0, 1])) / self.dim
        return np.tensordot(coeffs, self.basis, axes=(0, 0))

    @cached_property
    def expectation(self) -> Superop:
        return conditional_expectation(self)


def _coords_to_ops(coords: np.ndarray, m: int) -> np.ndarray:
    """Unit coordinate vectors (columns) -> tau-orthonormal operators."""
    k = coords.shape[1]
    out = np.empty((k, m, m), dtype=complex)
    for i in range(k):
        out[i] = unvec(np.sqrt(m) * coords[:, i], m)
    return out


def commutant(gens: list[np.ndarray], m: int | None = None) -> SubAlgebra:
    """Commutant {x : [g, x] = 0 for all g} as a SubAlgebra.

    The adjoints of the generators are included in the commutator stack, so
    the result is always a von Neumann algebra containing the identity (a
    no-op for Hermitian generators).  Computed as the joint nullspace of the
    stacked commutator superoperators with a scale-aware singular value
    cutoff at 1e-9 * sigma_max.
    """
    gens = [np.asarray(g, dtype=complex) for g in gens]
    if m is None:
        if not gens:
            raise ValueError("dimension required for an empty generator list")
        m = gens[0].shape[0]
    if not gens:
        return full_algebra(m)
    eye = np.eye(m, dtype=complex)
    blocks = []
    for g in gens:
        for h in (g, g.conj().T):
            blocks.append(np.kron(h, eye) - np.kron(eye, h.T))
    stacked = np.vstack(blocks)
    ns = nullspace_basis(stacked, rtol=1e-9)
    # rotate the basis so the identity direction comes first
    c0 = vec(eye) / np.sqrt(m)
    cols = [c0]
    for i in range(ns.shape[1]):
        v = ns[:, i]
        for c in cols:
            v = v - c * (c.conj() @ v)
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            cols.append(v / nrm)
    coords = np.column_stack(cols[: ns.shape[1]])
    return SubAlgebra(dim=m, basis=_coords_to_ops(coords, m), contains_identity=True)


def conditional_expectation(n: SubAlgebra) -> Superop:
    """Trace-preserving conditional expectation onto N as a superoperator.

    E(x) = sum_i b_i tau(b_i* x); unital, idempotent, positive and
    N-bimodular because the basis spans a *-subalgebra containing 1.
    """
    if not n.contains_identity:
        raise ValueError("conditional expectation requires 1 in the subalgebra")
    m = n.dim
    s = np.zeros((m * m, m * m), dtype=complex)
    for b in n.basis:
        vb = vec(b)
        s += np.outer(vb, vb.conj()) / m
    return make_superop(s, m)


def full_algebra(m: int) -> SubAlgebra:
    return SubAlgebra(dim=m, basis=np.sqrt(m) * matrix_units(m), contains_identity=True)


def scalar_algebra(m: int) -> SubAlgebra:
    return SubAlgebra(
        dim=m, basis=np.eye(m, dtype=complex)[None, :, :], contains_identity=True
    )


def diagonal_algebra(m: int) -> SubAlgebra:
    basis = np.zeros((m, m, m), dtype=complex)
    for i in range(m):
        basis[i, i, i] = np.sqrt(m)
    return SubAlgebra(dim=m, basis=basis, contains_identity=True)


@dataclass(frozen=True)
class ModuleBasis:
    """Right-module basis of M_m over N: <xi_i, xi_j> = E(xi_i* xi_j) = d_ij p_i."""

    algebra: SubAlgebra
    xis: np.ndarray       # (k, m, m)
    supports: np.ndarray  # (k, m, m), projections in N

    @property
    def size(self) -> int:
        return self.xis.shape[0]

    def coefficients(self, x: np.ndarray) -> np.ndarray:
        e = self.algebra.expectation
        return np.array([e.apply(xi.conj().T @ x) for xi in self.xis])

    def reconstruct(self, x: np.ndarray) -> np.ndarray:
        coeff = self.coefficients(x)
        return np.einsum("kij,kjl->il", self.xis, coeff)


def module_basis(n: SubAlgebra, candidates: np.ndarray | None = None) -> ModuleBasis:
    """Greedy module Gram-Schmidt over N, starting from xi_0 = 1.

    Candidates default to the matrix units in lexicographic order, which
    makes the basis deterministic across runs.  Each accepted residual r is
    normalized to r h^{-1/2} with h = E(r* r) restricted to its support
    (eigenvalues below 1e-10 are treated as kernel), so E(xi* xi) is an
    exact projection.
    """
    m = n.dim
    e = n.expectation
    if candidates is None:
        candidates = matrix_units(m)
    xis = [np.eye(m, dtype=complex)]
    supports = [np.eye(m, dtype=complex)]
    for cand in candidates:
        r = cand.astype(complex)
        for xi in xis:
            r = r - xi @ e.apply(xi.conj().T @ r)
        if hs_norm(r) <= 1e-9:
            continue
        h = e.apply(r.conj().T @ r)
        h = (h + h.conj().T) / 2.0
        w, u = np.linalg.eigh(h)
        cut = 1e-10 * max(w.max(), 1.0)
        inv_sqrt = np.where(w > cut, 1.0 / np.sqrt(np.clip(w, cut, None)), 0.0)
        supp = np.where(w > cut, 1.0, 0.0)
        xis.append(r @ ((u * inv_sqrt) @ u.conj().T))
        supports.append((u * supp) @ u.conj().T)
    return ModuleBasis(algebra=n, xis=np.array(xis), supports=np.array(supports))
