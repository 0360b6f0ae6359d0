"""JSON/CSV serialization for operators, jump sets, profiles and reports.

Operator JSON carries separate real and imaginary parts (complex numbers are
never serialized as strings):

    {"dim": m, "re": [[...]], "im": [[...]]}

and lists of operators as {"dim": m, "matrices": [{"re": ..., "im": ...}]}.
All documents are dumped with sorted keys so reruns are byte-identical.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import SubAlgebra
from .generator import JumpSet, LindbladGenerator
from .matops import Superop
from .subordinate import WeightProfile

__all__ = [
    "operator_to_obj",
    "obj_to_operator",
    "operators_to_obj",
    "obj_to_operators",
    "jumps_to_obj",
    "obj_to_jumps",
    "superop_to_obj",
    "subalgebra_to_obj",
    "generator_to_obj",
    "profile_from_obj",
    "state_to_physics",
    "state_from_physics",
    "dump_json",
]


def operator_to_obj(x: np.ndarray) -> dict:
    x = np.asarray(x, dtype=complex)
    return {
        "dim": int(x.shape[0]),
        "re": x.real.tolist(),
        "im": x.imag.tolist(),
    }


def obj_to_operator(obj: dict) -> np.ndarray:
    m = int(obj["dim"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros((m, m))), dtype=float)
    if re.shape != (m, m) or im.shape != (m, m):
        raise ValueError("operator entries do not match the declared dimension")
    return re + 1j * im


def operators_to_obj(mats: list[np.ndarray] | np.ndarray) -> dict:
    mats = [np.asarray(x, dtype=complex) for x in mats]
    if not mats:
        raise ValueError("empty operator list needs an explicit dimension")
    return {
        "dim": int(mats[0].shape[0]),
        "matrices": [
            {"re": x.real.tolist(), "im": x.imag.tolist()} for x in mats
        ],
    }


def obj_to_operators(obj: dict) -> list[np.ndarray]:
    m = int(obj["dim"])
    out = []
    for entry in obj["matrices"]:
        re = np.asarray(entry["re"], dtype=float)
        im = np.asarray(entry.get("im", np.zeros((m, m))), dtype=float)
        if re.shape != (m, m) or im.shape != (m, m):
            raise ValueError("operator entries do not match the declared dimension")
        out.append(re + 1j * im)
    return out


def jumps_to_obj(jumps: JumpSet) -> dict:
    return operators_to_obj(list(jumps.jumps))


def obj_to_jumps(obj: dict) -> JumpSet:
    m = int(obj["dim"])
    mats = obj_to_operators(obj)
    arr = np.array(mats) if mats else np.zeros((0, m, m), dtype=complex)
    return JumpSet(dim=m, jumps=arr)


def superop_to_obj(s: Superop) -> dict:
    out = operator_to_obj(s.matrix)
    out["acts_on_dim"] = int(s.dim)
    out["hs_selfadjoint"] = bool(s.hs_selfadjoint)
    out["kills_identity"] = bool(s.kills_identity)
    out["cp_semigroup"] = s.cp_semigroup
    return out


def subalgebra_to_obj(n: SubAlgebra) -> dict:
    out = operators_to_obj(list(n.basis))
    out["contains_identity"] = bool(n.contains_identity)
    return out


def generator_to_obj(gen: LindbladGenerator) -> dict:
    return {
        "jumps": jumps_to_obj(gen.jumps),
        "superop": superop_to_obj(gen.superop),
        "fixed_algebra": subalgebra_to_obj(gen.fixed_algebra),
    }


def profile_from_obj(obj: dict) -> WeightProfile:
    kind = obj.get("kind")
    if kind == "power":
        return WeightProfile.power_law(float(obj["alpha"]))
    if kind == "epssigma":
        return WeightProfile.eps_sigma(float(obj["eps"]), float(obj["sigma"]))
    if kind == "table":
        return WeightProfile.table(obj["points"])
    raise ValueError(f"unknown profile kind {kind!r}")


def state_to_physics(rho: np.ndarray) -> np.ndarray:
    """Convert a tau-normalized state (matrix trace m) to physics convention
    (matrix trace 1)."""
    return np.asarray(rho, dtype=complex) / rho.shape[0]


def state_from_physics(rho: np.ndarray) -> np.ndarray:
    """Convert a trace-1 density matrix to the tau convention used here."""
    return np.asarray(rho, dtype=complex) * rho.shape[0]


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
