"""Command line front end.

Subcommands: simulate (Monte Carlo revenue summary for one profile),
sweep-p (summaries across a bias grid), minimize-ratio (numeric search for
the best bias), verify (seeded check suites, exit code 0 only if all pass),
and generate (test profile files for simulate).  All output is JSON on
stdout; --out writes the same JSON to a file, except simulate --out with a
.csv path, which writes raw per-trial revenues instead.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from .analysis import approx_factors, guarantee_threshold, minimize_ratio
from .auction import SamplingBias
from .harness import (
    SimConfig,
    StatSummary,
    VERIFY_CHECKS,
    generate_profile,
    iter_trial_revenues,
    run_trials,
    run_verify,
    summarize,
)
from .profiles import Environment, ValuationProfile, make_profile


def load_values(path: str) -> tuple[ValuationProfile, int | None]:
    """Read a profile file: {"values": [ints], "units": int?}."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SystemExit(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SystemExit(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "values" not in data:
        raise SystemExit(f'{path} must be a JSON object with a "values" list')
    values = data["values"]
    if not isinstance(values, list) or not values:
        raise SystemExit(f'"values" in {path} must be a non-empty list')
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise SystemExit(f"values must be non-negative integers, got {v!r}")
    units = data.get("units")
    if units is not None and (not isinstance(units, int) or units < 1):
        raise SystemExit(f'"units" in {path} must be a positive integer')
    return make_profile(values), units


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _summary_dict(summary: StatSummary) -> dict:
    return {
        "trials": summary.trials,
        "mean": summary.mean,
        "stddev": summary.stddev,
        "stderr": summary.stderr,
        "low3": summary.low3,
        "high3": summary.high3,
    }


def _resolve_units(cli_k: int | None, file_units: int | None, path: str) -> int:
    if cli_k is not None:
        return cli_k
    if file_units is not None:
        return file_units
    raise SystemExit(f"{path} has no units field; pass --k")


def _cmd_simulate(args: argparse.Namespace) -> int:
    profile, file_units = load_values(args.values)
    env = Environment(_resolve_units(args.k, file_units, args.values))
    config = SimConfig(profile, env, SamplingBias(args.p), args.trials, args.seed)
    if args.out is not None and args.out.endswith(".csv"):
        revenues = []
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["trial", "revenue"])
            for t, rev in enumerate(iter_trial_revenues(config)):
                writer.writerow([t, rev])
                revenues.append(rev)
        summary = summarize(revenues)
        payload = {
            "n": profile.size,
            "units": env.units,
            "p": args.p,
            "seed": args.seed,
            "csv": args.out,
            **_summary_dict(summary),
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    summary = run_trials(config)
    payload = {
        "n": profile.size,
        "units": env.units,
        "p": args.p,
        "seed": args.seed,
        **_summary_dict(summary),
    }
    _emit(payload, args.out)
    return 0


def _cmd_sweep_p(args: argparse.Namespace) -> int:
    if args.steps < 2:
        raise SystemExit("--steps must be at least 2")
    profile, file_units = load_values(args.values)
    env = Environment(_resolve_units(args.k, file_units, args.values))
    rows = []
    for i in range(args.steps):
        p = args.p_min + (args.p_max - args.p_min) * i / (args.steps - 1)
        summary = run_trials(
            SimConfig(profile, env, SamplingBias(p), args.trials, args.seed)
        )
        rows.append({"p": p, **_summary_dict(summary)})
    payload = {
        "n": profile.size,
        "units": env.units,
        "seed": args.seed,
        "rows": rows,
    }
    _emit(payload, args.out)
    return 0


def _cmd_minimize_ratio(args: argparse.Namespace) -> int:
    p_star, ratio = minimize_ratio(args.lo, args.hi, tol=args.tol)
    factors = approx_factors(p_star)
    payload = {
        "p_star": p_star,
        "ratio": ratio,
        "r1": factors.r1,
        "r2": factors.r2,
        "threshold": guarantee_threshold(),
        "tol": args.tol,
    }
    _emit(payload, args.out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    report = run_verify(
        args.check, args.seed, trials=args.trials, instances=args.instances
    )
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0 if report["pass"] else 1


def _cmd_generate(args: argparse.Namespace) -> int:
    profile = generate_profile(args.kind, args.n, args.seed, args.scale)
    payload: dict = {"values": [val for _, val in profile.entries]}
    if args.k is not None:
        if args.k < 1:
            raise SystemExit("--k must be a positive integer")
        payload["units"] = args.k
    _emit(payload, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bspe",
        description="Biased-sampling profit-extraction auction tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo revenue summary")
    sim.add_argument("--values", required=True, help="JSON profile file")
    sim.add_argument("--k", type=int, default=None, help="units for sale")
    sim.add_argument("--p", type=float, default=0.26, help="sampling bias")
    sim.add_argument("--trials", type=int, default=10_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", default=None, help="write JSON, or CSV if *.csv")
    sim.set_defaults(func=_cmd_simulate)

    swp = sub.add_parser("sweep-p", help="revenue summaries across a bias grid")
    swp.add_argument("--values", required=True, help="JSON profile file")
    swp.add_argument("--k", type=int, default=None, help="units for sale")
    swp.add_argument("--p-min", type=float, default=0.05)
    swp.add_argument("--p-max", type=float, default=0.38)
    swp.add_argument("--steps", type=int, default=12)
    swp.add_argument("--trials", type=int, default=10_000)
    swp.add_argument("--seed", type=int, default=0)
    swp.add_argument("--out", default=None)
    swp.set_defaults(func=_cmd_sweep_p)

    mnr = sub.add_parser("minimize-ratio", help="search for the best bias")
    mnr.add_argument("--lo", type=float, default=0.05)
    mnr.add_argument("--hi", type=float, default=0.38)
    mnr.add_argument("--tol", type=float, default=1e-9)
    mnr.add_argument("--out", default=None)
    mnr.set_defaults(func=_cmd_minimize_ratio)

    ver = sub.add_parser("verify", help="seeded check suites")
    ver.add_argument("check", choices=VERIFY_CHECKS + ("all",))
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--trials", type=int, default=None, help="Monte Carlo size override")
    ver.add_argument("--instances", type=int, default=None, help="fuzz size override")
    ver.set_defaults(func=_cmd_verify)

    gen = sub.add_parser("generate", help="write a test profile file")
    gen.add_argument(
        "--kind",
        required=True,
        choices=("equal_revenue", "uniform", "bimodal", "constant"),
    )
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--scale", type=int, default=1000)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--k", type=int, default=None, help="units to embed")
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=_cmd_generate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
