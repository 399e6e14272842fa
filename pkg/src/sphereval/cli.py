"""Command-line interface: multipliers, conversions, operators, bodies, verify.

Exit codes: 0 ok, 1 verification failure, 2 usage error. Band limit,
quadrature points and seed default to SPHEREVAL_KMAX, SPHEREVAL_POINTS and
SPHEREVAL_SEED when set.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bodies import Ball, CapabilityError, Polytope
from .lefschetz import apply_power, fourier_op, l_op, l_op_berg, lambda_op
from .mval import KINDS, ValuationRep, builtin, convert
from .profiles import load_profile, profile_to_dict, save_profile
from .specfun import DEFAULT_K, DEFAULT_POINTS, kappa
from .transforms import TransformTag, multiplier_seq

N_RANGE = (3, 8)
K_RANGE = (2, 256)


class UsageError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _check_range(label, value, lo, hi):
    if value is None or not lo <= value <= hi:
        raise UsageError(f"{label} must lie in {lo}..{hi}, got {value}")


def _check_n(n):
    _check_range("--n", n, *N_RANGE)


def _check_i(n, i, lo=1, hi=None):
    _check_range("--i", i, lo, n - 1 if hi is None else hi)


def _check_kmax(K):
    _check_range("--kmax", K, *K_RANGE)


# --- multipliers -------------------------------------------------------------

TRANSFORMS = ("cosine", "radon-up", "radon-down", "box", "berg",
              "inverse-cosine", "inverse-box", "inverse-berg", "inverse-radon-up",
              "inverse-radon-down")


def _tag(name: str, n: int, i, j) -> TransformTag:
    base = name.removeprefix("inverse-")
    if base == "cosine":
        _check_i(n, i)
        tag = TransformTag.cosine(i)
    elif base == "radon-up":
        _check_i(n, i, hi=n - 2)
        _check_range("--j", j, i + 1, n - 1)
        tag = TransformTag.radon_up(i, j)
    elif base == "radon-down":
        _check_i(n, i, hi=n - 2)
        _check_range("--j", j, i + 1, n - 1)
        tag = TransformTag.radon_down(j, i)
    elif base in ("box", "berg"):
        j = n if j is None else j
        _check_range("--j", j, 2, n)
        tag = TransformTag.box(j) if base == "box" else TransformTag.berg(j)
    else:
        raise UsageError(f"--transform must be one of {', '.join(TRANSFORMS)}")
    return TransformTag.inverse(tag) if name.startswith("inverse-") else tag


def cmd_multipliers(args) -> int:
    _check_n(args.n)
    _check_kmax(args.kmax)
    if args.transform not in TRANSFORMS:
        raise UsageError(f"--transform must be one of {', '.join(TRANSFORMS)}")
    seq = multiplier_seq(_tag(args.transform, args.n, args.i, args.j), args.n, args.kmax)
    rows = [(k, float(v)) for k, v in enumerate(seq.values)]
    if args.format == "json":
        json.dump({"transform": args.transform, "n": args.n, "i": args.i, "j": args.j,
                   "rows": [{"k": k, "value": v} for k, v in rows]}, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["k", "value"])
        for k, v in rows:
            w.writerow([k, repr(v)])
    return 0


# --- valuations on disk -----------------------------------------------------

def _read_rep(path, kind, n, i) -> ValuationRep:
    if kind not in KINDS:
        raise UsageError(f"representation must be one of {', '.join(KINDS)}")
    _check_n(n)
    _check_i(n, i)
    try:
        p = load_profile(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    if p.n != n:
        raise UsageError(f"file holds an n={p.n} profile, --n is {n}")
    even = kind != "generating" or not p.coeffs[1::2].any()
    return ValuationRep(n, i, kind, p, even=bool(even))


def _write(profile, out) -> None:
    if out:
        save_profile(profile, out)
    else:
        json.dump(profile_to_dict(profile), sys.stdout, indent=2)
        sys.stdout.write("\n")


def cmd_builtin(args) -> int:
    _check_n(args.n)
    _check_kmax(args.kmax)
    v = builtin(args.name, args.n, args.i, args.kmax, even=not args.full, m=args.points)
    _write(v.profile, args.out)
    return 0


def cmd_convert(args) -> int:
    v = _read_rep(args.inp, args.src, args.n, args.i)
    if args.dst not in KINDS:
        raise UsageError(f"--to must be one of {', '.join(KINDS)}")
    _write(convert(v, args.dst).profile, args.out)
    return 0


OPS = {"lambda": lambda_op, "lop": l_op, "lop-berg": l_op_berg, "fourier": fourier_op}


def cmd_apply(args) -> int:
    if args.op not in OPS:
        raise UsageError(f"--op must be one of {', '.join(OPS)}")
    if args.power < 0:
        raise UsageError("--power must be nonnegative")
    v = _read_rep(args.inp, args.rep, args.n, args.i)
    out = apply_power(OPS[args.op], v, args.power)
    _write(out.profile, args.out)
    for rep in out.history:
        if rep.note:
            print(f"note: {rep.op}: {rep.note}", file=sys.stderr)
    return 0


# --- bodies ---------------------------------------------------------------

def load_body(path):
    """JSON {"vertices": [[...], ...]} or {"ball": {"n": n, "radius": r}}."""
    try:
        d = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    if "vertices" in d:
        return Polytope(d["vertices"])
    if "ball" in d:
        return Ball(int(d["ball"]["n"]), float(d["ball"].get("radius", 1.0)))
    raise UsageError("body JSON needs 'vertices' or 'ball'")


def cmd_body(args) -> int:
    K = load_body(args.file)
    try:
        u = np.array([float(x) for x in args.dir.split(",")])
    except ValueError:
        raise UsageError(f"--dir must be comma-separated numbers, got {args.dir!r}") from None
    if len(u) != K.n:
        raise UsageError(f"--dir needs {K.n} components, got {len(u)}")
    if not np.linalg.norm(u) > 0:
        raise UsageError("--dir must be nonzero")
    u = u / np.linalg.norm(u)
    if args.op == "support":
        val = K.support(u)
    elif isinstance(K, Ball):
        val = kappa(K.n - 1) * K.radius ** (K.n - 1)
    else:
        val = K.projection_volume(u)
    print(repr(float(val)))
    return 0


# --- verify / kappa ------------------------------------------------------

def cmd_verify(args) -> int:
    from .verification import run_all
    _check_n(args.n)
    _check_kmax(args.kmax)
    if args.samples < 2:
        raise UsageError(f"--samples must be >= 2, got {args.samples}")
    results = run_all(args.n, args.kmax, args.seed, args.samples)
    report = {"n": args.n, "kmax": args.kmax, "seed": args.seed,
              "checks": [r.as_dict() for r in results]}
    if args.json:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for r in results:
            print(f"{r.status.upper():4s} {r.check:34s} residual={r.residual:.3e} "
                  f"tol={r.tolerance:.1e} {r.detail}".rstrip())
    return 0 if all(r.passed for r in results) else 1


def cmd_kappa(args) -> int:
    if args.index < -1:
        raise UsageError(f"kappa index must be >= -1, got {args.index}")
    print(repr(kappa(args.index)))
    return 0


# --- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    kmax = _env_int("SPHEREVAL_KMAX", DEFAULT_K)
    seed = _env_int("SPHEREVAL_SEED", 0)
    p = _Parser(prog="sphereval", description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=_env_int("SPHEREVAL_POINTS", DEFAULT_POINTS),
                   help="quadrature points for kernel expansions")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("multipliers", help="multiplier table of a transform")
    m.add_argument("--transform", required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--i", type=int, default=1)
    m.add_argument("--j", type=int)
    m.add_argument("--kmax", type=int, default=kmax)
    m.add_argument("--format", choices=("csv", "json"), default="csv")
    m.set_defaults(func=cmd_multipliers)

    b = sub.add_parser("builtin", help="write a built-in generating function")
    b.add_argument("--name", required=True, help="Pi, MeanSection or SteinerJ")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--i", type=int, default=1)
    b.add_argument("--kmax", type=int, default=kmax)
    b.add_argument("--full", action="store_true", help="keep odd degrees")
    b.add_argument("--out")
    b.set_defaults(func=cmd_builtin)

    c = sub.add_parser("convert", help="change valuation representation")
    c.add_argument("--from", dest="src", required=True)
    c.add_argument("--to", dest="dst", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--i", type=int, required=True)
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_convert)

    a = sub.add_parser("apply", help="apply Lambda, L or the Fourier transform")
    a.add_argument("--op", required=True)
    a.add_argument("--rep", default="generating")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--i", type=int, required=True)
    a.add_argument("--in", dest="inp", required=True)
    a.add_argument("--out")
    a.add_argument("--power", type=int, default=1)
    a.set_defaults(func=cmd_apply)

    body = sub.add_parser("body", help="evaluate a convex body")
    bsub = body.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ev = bsub.add_parser("eval")
    ev.add_argument("--file", required=True)
    ev.add_argument("--op", choices=("support", "projvol"), required=True)
    ev.add_argument("--dir", required=True)
    ev.set_defaults(func=cmd_body)

    v = sub.add_parser("verify", help="run the acceptance checks")
    v.add_argument("--n", type=int, default=3)
    v.add_argument("--kmax", type=int, default=kmax)
    v.add_argument("--seed", type=int, default=seed)
    v.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo sample count")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("kappa", help="volume of the unit ball")
    k.add_argument("index", type=int)
    k.set_defaults(func=cmd_kappa)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"sphereval: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, CapabilityError, ArithmeticError) as e:
        print(f"sphereval: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
