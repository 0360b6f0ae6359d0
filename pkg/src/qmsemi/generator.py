"""Lindblad generators built from Hermitian jump operators.

A jump set {a_1, ..., a_r} of Hermitian matrices defines the self-adjoint
generator

    L(x) = sum_k (a_k^2 x + x a_k^2 - 2 a_k x a_k),

the derivation delta(x) = ([a_k, x])_k, and the gradient form (carre du
champ) Gamma(x, y) = sum_k [a_k, x]* [a_k, y].  The fixed-point algebra of
e^{-tL} is the commutant of the jumps and carries the trace-preserving
conditional expectation against which all entropy decay is measured.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import SubAlgebra, commutant, conditional_expectation
from .matops import Superop, is_hermitian, standard_choi, superop_from_action

__all__ = [
    "JumpSet",
    "jump_set",
    "LindbladGenerator",
    "lindblad",
    "derivation",
    "gradient_form",
    "gradient_form_ie",
    "gradient_form_from_map",
    "gradient_form_weak",
    "validate_generator",
    "spectral_gap",
]


@dataclass(frozen=True)
class JumpSet:
    """Hermitian jump operators a_1..a_r on M_m."""

    dim: int
    jumps: np.ndarray  # (r, m, m)

    def __post_init__(self):
        for k, a in enumerate(self.jumps):
            if not is_hermitian(a):
                raise ValueError(f"jump operator {k} is not Hermitian")

    @property
    def size(self) -> int:
        return self.jumps.shape[0]


def jump_set(jumps: list[np.ndarray] | np.ndarray, m: int | None = None) -> JumpSet:
    arr = np.asarray(jumps, dtype=complex)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    if arr.size == 0:
        if m is None:
            raise ValueError("dimension required for an empty jump set")
        arr = arr.reshape(0, m, m)
    return JumpSet(dim=arr.shape[-1], jumps=arr)


@dataclass(frozen=True)
class LindbladGenerator:
    jumps: JumpSet
    superop: Superop
    fixed_algebra: SubAlgebra

    @cached_property
    def e_fix(self) -> Superop:
        return conditional_expectation(self.fixed_algebra)

    @property
    def dim(self) -> int:
        return self.jumps.dim


def lindblad(jumps: JumpSet) -> LindbladGenerator:
    """Build the generator, its fixed algebra, and mark the semigroup CP."""
    m = jumps.dim
    sq = np.einsum("kij,kjl->il", jumps.jumps, jumps.jumps)

    def action(x):
        return sq @ x + x @ sq - 2.0 * np.einsum("kij,jl,klp->ip", jumps.jumps, x, jumps.jumps)

    sup = superop_from_action(action, m).with_cp_flag("verified")
    fixed = commutant(list(jumps.jumps), m)
    return LindbladGenerator(jumps=jumps, superop=sup, fixed_algebra=fixed)


def derivation(jumps: JumpSet, x: np.ndarray) -> np.ndarray:
    """delta(x) = ([a_k, x])_k, shape (r, m, m)."""
    if x.shape != (jumps.dim, jumps.dim):
        raise ValueError("dimension mismatch")
    a = jumps.jumps
    return np.einsum("kij,jl->kil", a, x) - np.einsum("ij,kjl->kil", x, a)


def gradient_form(jumps: JumpSet, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gamma(x, y) = sum_k [a_k, x]* [a_k, y]; PSD at x = y, sesquilinear."""
    dx = derivation(jumps, x)
    dy = derivation(jumps, y)
    return np.einsum("kij,kil->jl", dx.conj(), dy)


def gradient_form_ie(n: SubAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gradient form of I - E_N: (x*y - E(x)*y - x*E(y) + E(x*y)) / 2."""
    e = n.expectation
    return gradient_form_from_map(e, x, y)


def gradient_form_from_map(t: Superop, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gradient form of the generator I - T for a unital CP self-adjoint T."""
    if x.shape != y.shape or x.shape[0] != t.dim:
        raise ValueError("dimension mismatch")
    xs = x.conj().T
    return 0.5 * (xs @ y - t.apply(x).conj().T @ y - xs @ t.apply(y) + t.apply(xs @ y))


def gradient_form_weak(a: Superop, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gradient form of an arbitrary self-adjoint generator A:

        Gamma_A(x, y) = (A(x)* y + x* A(y) - A(x* y)) / 2.
    """
    if x.shape != y.shape or x.shape[0] != a.dim:
        raise ValueError("dimension mismatch")
    xs = x.conj().T
    return 0.5 * (a.apply(x).conj().T @ y + xs @ a.apply(y) - a.apply(xs @ y))


def validate_generator(a: Superop, times: tuple[float, ...] = (0.1, 1.0, 10.0)) -> dict:
    """Check the standing generator assumptions and report per-check results.

    Complete positivity of e^{-tA} is tested at the given times through
    PSD-ness of the matrix-unit Choi block matrix.
    """
    report: dict = {
        "hs_selfadjoint": bool(a.hs_selfadjoint),
        "kills_identity": bool(a.kills_identity),
    }
    if a.hs_selfadjoint:
        w, _ = a.eig
        scale = max(np.abs(w).max(), 1.0)
        report["psd"] = bool(w.min() >= -1e-10 * scale)
    else:
        report["psd"] = False
    cp_ok = True
    if a.hs_selfadjoint:
        w, v = a.eig
        for t in times:
            expm = (v * np.exp(-t * w)) @ v.conj().T
            choi = standard_choi(Superop(a.dim, expm, True, False))
            cw = np.linalg.eigvalsh((choi + choi.conj().T) / 2.0)
            if cw.min() < -1e-9 * max(abs(cw).max(), 1.0):
                cp_ok = False
                break
    else:
        cp_ok = False
    report["cp_semigroup"] = cp_ok
    report["all_passed"] = all(
        report[k] for k in ("hs_selfadjoint", "kills_identity", "psd", "cp_semigroup")
    )
    return report


def spectral_gap(a: Superop) -> float:
    """Smallest eigenvalue of A on the complement of its nullspace; 0 if A = 0."""
    w, _ = a.eig
    scale = np.abs(w).max()
    if scale <= 0.0:
        return 0.0
    pos = w[w > 1e-10 * scale]
    return float(pos.min()) if pos.size else 0.0
