"""Command-line interface.

Subcommands bind the library operations to files and flags; every command is
pure given (inputs, flags, seed), so rerunning with the same arguments
produces byte-identical primary output.  Exit codes: 0 success, 1 input or
validation error, 2 meaningful negative result (e.g. a zero constant),
3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import casebook
from .constants import flsi_estimate
from .cporder import gamma_e_constant
from .entropy import default_grid, simulate_decay
from .generator import lindblad
from .io import (
    dump_json,
    generator_to_obj,
    obj_to_jumps,
    obj_to_operator,
    operator_to_obj,
    profile_from_obj,
    state_from_physics,
    state_to_physics,
    superop_to_obj,
)
from .matops import make_state, random_state
from .subordinate import (
    auto_sigma,
    eps_sigma_generator,
    fractional_power,
    subordinated_generator,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NEGATIVE = 2
EXIT_NUMERICAL = 3


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_generator(path: str):
    jumps = obj_to_jumps(_load_json(path))
    return lindblad(jumps)


def _parse_tols(pairs: list[str]) -> dict:
    out = {}
    for p in pairs or []:
        key, _, val = p.partition("=")
        if not val:
            raise ValueError(f"--tol expects KEY=VALUE, got {p!r}")
        out[key] = float(val)
    return out


def _run_config(args) -> dict:
    return {
        "seed": int(getattr(args, "seed", 0)),
        "tolerances": _parse_tols(getattr(args, "tol", None)),
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gamma_e(args) -> int:
    gen = _load_generator(args.jumps)
    cert = gamma_e_constant(gen)
    doc = cert.to_json()
    doc["config"] = _run_config(args)
    _emit(dump_json(doc), args.out)
    return EXIT_OK if cert.lambda_star > 0.0 else EXIT_NEGATIVE


def cmd_flsi(args) -> int:
    if args.starts < 1:
        raise ValueError("--starts must be at least 1")
    gen = _load_generator(args.jumps)
    est = flsi_estimate(gen, n_starts=args.starts, seed=args.seed,
                        n_validate=args.validate)
    doc = est.to_json()
    doc["config"] = _run_config(args)
    _emit(dump_json(doc), args.out)
    return EXIT_OK


def cmd_subordinate(args) -> int:
    gen = _load_generator(args.jumps)
    n_modes = sum(x is not None for x in (args.theta, args.eps, args.profile))
    if n_modes != 1:
        raise ValueError("choose exactly one of --theta, --eps, --profile")
    report: dict = {"config": _run_config(args)}
    if args.theta is not None:
        sub = fractional_power(gen.superop, args.theta)
        report["mode"] = {"theta": args.theta}
    elif args.eps is not None:
        if args.sigma == "auto":
            t0 = auto_sigma(gen)
            sigma = t0["sigma"]
            report["mode"] = {"eps": args.eps, "sigma": sigma, "t0": t0["t0"]}
        else:
            sigma = float(args.sigma)
            report["mode"] = {"eps": args.eps, "sigma": sigma}
        sub = eps_sigma_generator(gen.superop, args.eps, sigma)
        norm_l = gen.superop.norm
        bound = (2.0 / sigma + norm_l**2) / (2.0 * abs(math.log(args.eps)))
        report["distance"] = (gen.superop - sub).norm
        report["distance_bound"] = bound
        report["bound_satisfied"] = bool(report["distance"] <= bound * (1 + 1e-10))
    else:
        prof = profile_from_obj(_load_json(args.profile))
        sub = subordinated_generator(gen.superop, prof)
        report["mode"] = {"profile": prof.kind}
    doc = {"superop": superop_to_obj(sub), "report": report}
    _emit(dump_json(doc), args.out)
    return EXIT_OK


def cmd_decay(args) -> int:
    gen = _load_generator(args.jumps)
    if args.lam == "auto":
        lam = gamma_e_constant(gen).lambda_star
    else:
        lam = float(args.lam)
    if args.grid:
        a, b, npts = args.grid.split(":")
        a, b, npts = float(a), float(b), int(npts)
        grid = np.array([a]) if npts == 1 else np.geomspace(a, b, npts)
    else:
        grid = default_grid(lam if lam > 0 else 1.0)
    if args.state == "random":
        rho0 = random_state(gen.dim, np.random.default_rng(args.seed))
    else:
        rho0 = make_state(obj_to_operator(_load_json(args.state)))
    trace = simulate_decay(gen.superop, gen.fixed_algebra, rho0, grid, lam)
    _emit(trace.to_csv(), args.out)
    return EXIT_OK


def cmd_casebook(args) -> int:
    kwargs = {"seed": args.seed}
    if args.n is not None:
        kwargs["n"] = args.n
    if args.alpha is not None:
        kwargs["alpha"] = args.alpha
    if args.delta is not None:
        kwargs["delta"] = args.delta
    if args.m is not None:
        kwargs["m"] = args.m
    if args.all:
        results = casebook.run_all(**{"seed": args.seed})
    else:
        if args.name is None:
            raise ValueError("give a case name or --all")
        results = [casebook.run_case(args.name, **kwargs)]
    chunks = [dump_json(r.to_json()) for r in results]
    chunks.append(casebook.summary_tsv(results))
    _emit("".join(chunks), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


def cmd_state_convert(args) -> int:
    rho = obj_to_operator(_load_json(args.state))
    if args.to == "tau":
        out = state_from_physics(rho)
    else:
        out = state_to_physics(rho)
    _emit(dump_json(operator_to_obj(out)), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    from .generator import validate_generator

    gen = _load_generator(args.jumps)
    report = validate_generator(gen.superop)
    doc = {"report": report, "generator": generator_to_obj(gen),
           "config": _run_config(args)}
    _emit(dump_json(doc), args.out)
    return EXIT_OK if report["all_passed"] else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed recorded in outputs")
    p.add_argument("--out", default=None, help="write primary output to this path")
    p.add_argument("--format", choices=["json", "csv", "tsv"], default=None,
                   help="output format (informational; commands pick the natural one)")
    p.add_argument("--tol", action="append", default=None, metavar="KEY=VAL",
                   help="tolerance override, recorded in the run config")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qmsemi",
        description="quantum Markov semigroup toolkit: decay certificates, "
        "subordination, entropy traces and the casebook",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma-e", help="certify the gradient-order constant")
    p.add_argument("jumps", help="JSON file with Hermitian jump operators")
    _add_common(p)
    p.set_defaults(func=cmd_gamma_e)

    p = sub.add_parser("flsi", help="bracket the entropy-decay constant")
    p.add_argument("jumps")
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--validate", type=int, default=10_000,
                   help="random states for the lower-bracket validation sweep")
    _add_common(p)
    p.set_defaults(func=cmd_flsi)

    p = sub.add_parser("subordinate", help="fractional powers and weighted calculus")
    p.add_argument("jumps")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--sigma", default="auto",
                   help="sigma for --eps mode, or 'auto' for 1/ln(t0)")
    p.add_argument("--profile", default=None, help="JSON weight-profile file")
    _add_common(p)
    p.set_defaults(func=cmd_subordinate)

    p = sub.add_parser("decay", help="entropy decay trace as CSV")
    p.add_argument("jumps")
    p.add_argument("--lambda", dest="lam", default="auto",
                   help="decay rate for the reference bound, or 'auto'")
    p.add_argument("--grid", default=None, metavar="A:B:N",
                   help="geometric time grid; default 60 points on [1e-3,6]/lambda")
    p.add_argument("--state", default="random", help="state JSON file or 'random'")
    _add_common(p)
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("casebook", help="run named cases with machine checks")
    casesub = p.add_subparsers(dest="casebook_command", required=True)
    pr = casesub.add_parser("run", help="run one case or all of them")
    pr.add_argument("name", nargs="?", default=None,
                    help=f"case name, one of {sorted(casebook.CASES)}")
    pr.add_argument("--all", action="store_true")
    pr.add_argument("--n", type=int, default=None)
    pr.add_argument("--alpha", type=float, default=None)
    pr.add_argument("--delta", type=float, default=None)
    pr.add_argument("--m", type=int, default=None)
    _add_common(pr)
    pr.set_defaults(func=cmd_casebook)

    p = sub.add_parser("state-convert",
                       help="convert states between tau and trace-1 conventions")
    p.add_argument("state")
    p.add_argument("--to", choices=["tau", "physics"], required=True)
    _add_common(p)
    p.set_defaults(func=cmd_state_convert)

    p = sub.add_parser("validate", help="check generator assumptions")
    p.add_argument("jumps")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
