"""Relative entropy, Fisher information (entropy production) and decay traces.

All quantities use the normalized trace tau = tr/m, so states carry matrix
trace m.  Eigenvalues below 1e-12 (relative) are clamped before logarithms
and the support-restricted branch is used for singular states; results
record which branch ran where that matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import SubAlgebra
from .matops import Superop, identity_superop, semigroup_apply

__all__ = [
    "relative_entropy",
    "d_sub",
    "fisher",
    "fisher_n",
    "DecayTrace",
    "simulate_decay",
    "default_grid",
]

EIG_CLAMP = 1e-12


def _checked_spectrum(x: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    w, u = np.linalg.eigh(x)
    scale = max(np.abs(w).max(), 1.0)
    if w.min() < -1e-9 * scale:
        raise ValueError(f"{name} has negative eigenvalue {w.min():.3e}")
    return np.clip(w, 0.0, None), u


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """D(rho||sigma) = tau(rho ln rho) - tau(rho ln sigma), +inf off-support.

    Uses 0 log 0 = 0.  Nonnegative whenever tau(rho) = tau(sigma).
    """
    m = rho.shape[0]
    w_r, u_r = _checked_spectrum(rho, "rho")
    w_s, u_s = _checked_spectrum(sigma, "sigma")
    clamp_r = EIG_CLAMP * max(w_r.max(), 1.0)
    clamp_s = EIG_CLAMP * max(w_s.max(), 1.0)
    ent = sum(v * math.log(v) for v in w_r if v > clamp_r) / m
    # weights of rho in the eigenbasis of sigma
    overlap = u_s.conj().T @ rho @ u_s
    weights = np.diag(overlap).real
    off_support = weights[w_s <= clamp_s].sum()
    if off_support > 1e-12 * max(w_r.max(), 1.0):
        return math.inf
    cross = sum(
        wt * math.log(v) for wt, v in zip(weights, w_s) if v > clamp_s
    ) / m
    return ent - cross


def d_sub(rho: np.ndarray, n: SubAlgebra) -> float:
    """Relative entropy to the subalgebra, D(rho || E_N(rho))."""
    return relative_entropy(rho, n.expectation.apply(rho))


def fisher(
    a: Superop, rho: np.ndarray, eps_shift: float = 0.0, return_branch: bool = False
):
    """Fisher information / entropy production tau(A(rho) ln(rho + eps 1)).

    For eps_shift = 0 and singular rho the logarithm is restricted to the
    support of rho, which is legitimate only when A(rho) carries no weight
    there; otherwise the quantity diverges and a ValueError asks the caller
    to supply an eps_shift.  With return_branch the evaluation path is
    reported alongside the value ("shifted", "full" or "support").
    """
    m = rho.shape[0]
    w, u = _checked_spectrum(rho, "rho")
    y = a.apply(rho)
    ydiag = np.diag(u.conj().T @ y @ u).real
    if eps_shift > 0.0:
        val = float(ydiag @ np.log(w + eps_shift)) / m
        return (val, "shifted") if return_branch else val
    clamp = EIG_CLAMP * max(w.max(), 1.0)
    on = w > clamp
    branch = "full" if on.all() else "support"
    leak = np.abs(ydiag[~on]).sum()
    if leak > 1e-10 * max(np.abs(ydiag).max(), 1.0):
        raise ValueError("ill-defined Fisher information, supply eps_shift")
    val = float(ydiag[on] @ np.log(w[on])) / m
    return (val, branch) if return_branch else val


def fisher_n(n: SubAlgebra, rho: np.ndarray, eps_shift: float = 0.0) -> float:
    """Fisher information of the generator I - E_N.

    Equals D(rho||E(rho)) + D(E(rho)||rho), the symmetrized divergence.
    """
    a = identity_superop(n.dim) - n.expectation
    return fisher(a, rho, eps_shift)


@dataclass(frozen=True)
class DecayTrace:
    """Entropy decay along the semigroup with an exponential reference bound."""

    times: np.ndarray
    d_n: np.ndarray
    i_a: np.ndarray
    bound: np.ndarray
    lambda_used: float

    def to_csv(self) -> str:
        lines = ["t,D_N,I_A,bound"]
        for t, d, i, b in zip(self.times, self.d_n, self.i_a, self.bound):
            lines.append(f"{t:.17g},{d:.17g},{i:.17g},{b:.17g}")
        return "\n".join(lines) + "\n"


def default_grid(lam: float, n: int = 60) -> np.ndarray:
    """Geometric grid on [1e-3/lam, 6/lam], resolving slope and tail."""
    if lam <= 0:
        lam = 1.0
    return np.geomspace(1e-3 / lam, 6.0 / lam, n)


def simulate_decay(
    a: Superop,
    n: SubAlgebra,
    rho0: np.ndarray,
    t_grid: np.ndarray,
    lam: float = 0.0,
) -> DecayTrace:
    """Evolve rho through e^{-tA}, recording D_N, I_A and e^{-lam t} D_N(rho0)."""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("time grid must be strictly increasing")
    d0 = d_sub(rho0, n)
    d_vals, i_vals = [], []
    for t in t_grid:
        rho_t = semigroup_apply(a, t, rho0)
        rho_t = (rho_t + rho_t.conj().T) / 2.0
        wmin = np.linalg.eigvalsh(rho_t).min()
        if wmin < -1e-8:
            raise ValueError(f"state developed eigenvalue {wmin:.3e} (CP violation)")
        d_vals.append(d_sub(rho_t, n))
        i_vals.append(fisher(a, rho_t))
    bound = math.e ** (-lam * t_grid) * d0 if lam > 0 else np.full_like(t_grid, d0)
    return DecayTrace(
        times=t_grid,
        d_n=np.array(d_vals),
        i_a=np.array(i_vals),
        bound=np.asarray(bound),
        lambda_used=lam,
    )
