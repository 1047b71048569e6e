"""Batch command line: ``paircollect <subcommand> [options]``.

Results go to stdout (or ``--out``) as json-lines or csv; progress and
timing go to stderr so that output is byte-reproducible for a fixed seed.
Exit codes: 0 success, 2 parameter error, 3 enumeration size guard.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from contextlib import nullcontext
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from . import distributions as dist
from .limitlaws import (
    LimitLaw,
    Regime,
    cf_limit_fixed_k,
    dprime_diagnostic,
    ks_distance,
    normalization_for,
    scaled_tail_limit,
)
from .oracle import SizeGuardError, enumerate_laws
from .report import FORMATS, emit_report
from .simulate import SimConfig, Target, default_workers, normalize_sample, run_experiment

EXIT_PARAM = 2
EXIT_SIZE = 3


class ParamError(ValueError):
    pass


def parse_a_rule(rule: str) -> Callable[[int], int]:
    """Map an a-rule string to a function n -> a_n.

    ``k:<int>``, ``floor-frac:<num>/<den>``, ``n-minus:<int>``, ``floor-sqrt``
    and ``n-minus-sqrt`` (a_n = n - floor(sqrt n)).
    """
    name, _, arg = rule.partition(":")
    try:
        if name == "k":
            k = int(arg)
            return lambda n: k
        if name == "floor-frac":
            frac = Fraction(arg)
            return lambda n: math.floor(frac * n)
        if name == "n-minus":
            c = int(arg)
            return lambda n: n - c
    except ValueError as exc:
        raise ParamError(f"bad a-rule {rule!r}") from exc
    if name == "floor-sqrt" and not arg:
        return lambda n: math.isqrt(n)
    if name == "n-minus-sqrt" and not arg:
        return lambda n: n - math.isqrt(n)
    raise ParamError(f"unknown a-rule {rule!r}")


DEFAULT_A_RULES = {
    "fixedk": "k:1",
    "sublinear": "floor-sqrt",
    "proportional": "floor-frac:1/2",
    "nearcomplete": "n-minus-sqrt",
    "kthmax": "n-minus:1",
    "fullmax": "n-minus:0",
}

LAW_REGIMES = {
    "gumbel": ("fullmax",),
    "kthmax": ("kthmax", "fullmax"),
    "normal": ("sublinear", "proportional", "nearcomplete"),
    "erlang": ("fixedk",),
}


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


# subcommand handlers return (rows, csv header)


def cmd_pmf(args):
    rows = []
    if args.dist == "y" and args.j is None:
        raise ParamError("--j is required for --dist y")
    for k in range(2, args.kmax + 1):
        if args.dist == "y":
            value = dist.pmf_Y(args.n, args.j, k, exact=args.exact)
        else:
            value = dist.pmf_X(args.n, k, exact=args.exact)
        rows.append({"dist": args.dist, "n": args.n, "j": args.j if args.dist == "y" else None, "k": k, "pmf": value})
    return rows, ["dist", "n", "j", "k", "pmf"]


def cmd_tail(args):
    if args.dist == "y" and args.j is None:
        raise ParamError("--j is required for --dist y")
    j = args.j if args.dist == "y" else 1
    value = dist.tail_Y(args.n, j, args.m, exact=args.exact)
    return [{"dist": args.dist, "n": args.n, "j": args.j if args.dist == "y" else None, "m": args.m, "tail": value}], None


def cmd_moments(args):
    n = args.n
    row = {"target": args.target, "n": n}
    if args.target == "y":
        if args.j is None:
            raise ParamError("--j is required for --target y")
        summary = dist.moments_Y(n, args.j)
        row["param"] = args.j
    elif args.target == "s":
        if args.a is None:
            raise ParamError("--a is required for --target s")
        summary = dist.moments_S(n, args.a)
        row["param"] = args.a
    else:
        summary, asym_mean, asym_var = dist.moments_M(n)
        row["param"] = n
    row["mean"] = summary.mean
    row["variance"] = summary.variance
    if args.asym:
        if args.target == "y":
            raise ParamError("no asymptotic form for a single Y; use --target s or m")
        if args.target == "s":
            if args.regime is None:
                raise ParamError("--regime is required with --asym for --target s")
            asym_mean, asym_var, _ = dist.moments_S_asym(n, args.a, args.regime)
        row["asym_mean"] = asym_mean
        row["asym_variance"] = asym_var
    return [row], None


def _target_from_args(args) -> Target:
    if args.target == "y":
        return Target("Y", args.j)
    if args.target == "s":
        return Target("S", args.a)
    if args.target == "kmax":
        return Target("KthMax", args.k)
    return Target("M")


def cmd_simulate(args):
    for flag, needed in (("j", "y"), ("a", "s"), ("k", "kmax")):
        if args.target == needed and getattr(args, flag) is None:
            raise ParamError(f"--{flag} is required for --target {needed}")
    config = SimConfig(args.n, _target_from_args(args), args.reps, args.seed, args.backend)
    sample = run_experiment(config, workers=args.workers)
    base = {
        "target": config.target.tag,
        "n": config.n,
        "backend": config.resolved_backend,
        "reps": config.replications,
        "seed": config.master_seed,
    }
    if args.values:
        return [{**base, "index": i, "value": int(v)} for i, v in enumerate(sample.values)], None
    v = sample.values.astype(float)
    row = {
        **base,
        "mean": float(np.mean(v)),
        "variance": float(np.var(v, ddof=1)) if len(v) > 1 else 0.0,
        "std_error": sample.std_error() if len(v) > 1 else 0.0,
        "min": int(sample.values[0]),
        "median": float(np.median(v)),
        "max": int(sample.values[-1]),
    }
    return [row], None


def _regime_for(kind: str, n: int, a: int) -> Regime:
    if kind == "fixedk":
        return Regime.fixed_k(a)
    if kind == "kthmax":
        return Regime.kth_max(n - a + 1)
    return Regime(kind)


def _law_for(law: str, regime: Regime) -> LimitLaw:
    if law == "erlang":
        return LimitLaw("erlang", regime.k)
    if law == "normal":
        return LimitLaw("normal")
    return LimitLaw("gumbel", regime.k if regime.kind == "kthmax" else 1)


def cmd_converge(args):
    if args.regime not in LAW_REGIMES[args.law]:
        raise ParamError(f"law {args.law} does not match regime {args.regime}")
    rule = parse_a_rule(args.a_rule or DEFAULT_A_RULES[args.regime])
    rows = []
    for n in args.n_grid:
        a = rule(n)
        regime = _regime_for(args.regime, n, a)
        norm = normalization_for(n, a, regime)
        config = SimConfig(n, Target("S", a), args.reps, args.seed, args.backend)
        started = time.perf_counter()
        sample = normalize_sample(run_experiment(config, workers=args.workers), norm)
        report = ks_distance(sample, _law_for(args.law, regime), norm)
        print(f"converge n={n} a={a} ks={report.distance:.4f} ({time.perf_counter() - started:.1f}s)", file=sys.stderr)
        rows.append(
            {
                "law": report.law.tag,
                "regime": regime.tag,
                "n": n,
                "a": a,
                "reps": args.reps,
                "seed": args.seed,
                "backend": config.resolved_backend,
                "center": norm.center,
                "scale": norm.scale,
                "ks": report.distance,
            }
        )
    return rows, None


def _diag_row(check, quantity, n=None, k=None, x=None, value=None, reference=None, error=None):
    return {
        "check": check,
        "quantity": quantity,
        "n": n,
        "k": k,
        "x": x,
        "value": value,
        "reference": reference,
        "error": error,
    }


def cmd_diagnose(args):
    rows = []
    check = args.check
    if check == "cf-identity":
        t = np.linspace(-20, 20, 4001)
        for k in range(1, args.k + 1):
            gap = float(np.max(np.abs(cf_limit_fixed_k(k, t) - (1 - 1j * t) ** (-k))))
            rows.append(_diag_row(check, "sup_cf_gap", k=k, value=gap, reference=0.0, error=gap))
        return rows, None
    if args.n_grid is None:
        raise ParamError(f"--n-grid is required for --check {check}")
    for n in args.n_grid:
        if check == "asym-moments":
            exact, _, asym_var = dist.moments_M(n)
            with mpmath.workdps(60):
                gap = abs(mpmath.mpf(exact.mean.numerator) / exact.mean.denominator - dist.asym_mean_M(n, dps=60))
                rows.append(_diag_row(check, "n2_mean_gap", n=n, value=float(n * n * gap)))
            rows.append(_diag_row(check, "var_gap_over_n2", n=n, value=float(abs(exact.variance - Fraction(asym_var)) / (n * n))))
            continue
        for x in args.x:
            if check == "tail-limit":
                value, ref = scaled_tail_limit(n, x), math.exp(-x)
                rows.append(_diag_row(check, "n_tail", n=n, x=x, value=value, reference=ref, error=abs(value / ref - 1)))
            else:
                value, ref = dprime_diagnostic(n, args.k, x), math.exp(-2 * x) / args.k
                rows.append(_diag_row(check, "dprime_sum", n=n, k=args.k, x=x, value=value, reference=ref, error=abs(value / ref - 1)))
    return rows, None


def cmd_oracle(args):
    n, L = args.n, args.len
    laws = enumerate_laws(n, L)
    rows = []

    def add(law, j, k, enumerated, closed):
        rows.append({"n": n, "len": L, "law": law, "j": j, "k": k, "enumerated": enumerated, "closed_form": closed, "match": enumerated == closed})

    for j in range(1, n + 1):
        pmf = laws.pmf_X(j)
        for k in range(2, L + 1):
            add(f"X{j}", 1, k, pmf.get(k, Fraction(0)), dist.pmf_X(n, k, exact=True))
    for size in range(1, n + 1):
        A = tuple(range(1, size + 1))
        pmf = laws.pmf_Ytilde(A)
        for k in range(2, L + 1):
            add("Y", size, k, pmf.get(k, Fraction(0)), dist.pmf_Y(n, size, k, exact=True))
        for m in range(1, L + 1):
            add("joint_tail", size, m, laws.joint_tail(A, m), dist.tail_Y(n, size, m, exact=True))
    return rows, None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="jsonl")
    common.add_argument("--out", help="write output to this path instead of stdout")

    workers = argparse.ArgumentParser(add_help=False)
    workers.add_argument("--workers", type=int, default=None, help="worker processes (env PAIRCOLLECT_WORKERS)")

    parser = argparse.ArgumentParser(prog="paircollect", description="Exact laws and limit theorems for collecting pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pmf", parents=[common], help="point probabilities of X or Y")
    p.add_argument("--dist", choices=("x", "y"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("tail", parents=[common], help="tail probability P{. > m}")
    p.add_argument("--dist", choices=("x", "y"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("moments", parents=[common], help="exact and asymptotic moments")
    p.add_argument("--target", choices=("y", "s", "m"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--asym", action="store_true")
    p.add_argument("--regime", choices=("sublinear", "proportional", "nearcomplete"))
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("simulate", parents=[common, workers], help="Monte Carlo sample summary")
    p.add_argument("--target", choices=("y", "s", "m", "kmax"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--backend", choices=("process", "inversion"))
    p.add_argument("--values", action="store_true", help="emit every sorted sample value")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("converge", parents=[common, workers], help="KS distance to the limit law over an n grid")
    p.add_argument("--law", choices=tuple(LAW_REGIMES), required=True)
    p.add_argument("--regime", choices=tuple(DEFAULT_A_RULES), required=True)
    p.add_argument("--n-grid", type=_int_list, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--a-rule")
    p.add_argument("--backend", choices=("process", "inversion"))
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("diagnose", parents=[common], help="deterministic convergence diagnostics")
    p.add_argument("--check", choices=("tail-limit", "dprime", "cf-identity", "asym-moments"), required=True)
    p.add_argument("--n-grid", type=_int_list)
    p.add_argument("--x", type=_float_list, default=[0.0])
    p.add_argument("--k", type=int, default=5, help="block count for dprime, largest k for cf-identity")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive enumeration against closed forms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--len", type=int, required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "workers") and args.workers is None:
        args.workers = default_workers()
    started = time.perf_counter()
    try:
        rows, header = args.func(args)
    except SizeGuardError as exc:
        print(f"paircollect: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ValueError, ArithmeticError) as exc:
        print(f"paircollect: {exc}", file=sys.stderr)
        return EXIT_PARAM
    target = open(args.out, "w", newline="") if args.out else nullcontext(sys.stdout)
    with target as stream:
        emit_report(rows, args.format, stream, header=header)
    print(f"paircollect {args.command}: {len(rows)} rows in {time.perf_counter() - started:.2f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
