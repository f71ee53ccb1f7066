"""Command-line front end: distributions, simulation sweeps, analytic oracles,
and the exact-arithmetic self-check suite.

Exit status: 0 on success, 1 on hard failures (including self-check
violations), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import harness, oracles
from .degrees import min_k_for_spec, parse_dist_spec


def _echo(line: str) -> None:
    print(line, file=sys.stderr)


def _parse_grid(text: str) -> tuple[str, tuple]:
    """Grid flag forms: 'a:b:s' (normalized range, inclusive) or 'n=1,2,3'."""
    text = text.strip()
    if text.startswith("n="):
        values = tuple(int(v) for v in text[2:].split(","))
        if not values:
            raise ValueError("empty raw grid")
        return "raw", values
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be 'a:b:s' or 'n=...', got {text!r}")
    a, b, s = (float(p) for p in parts)
    if s <= 0 or b < a:
        raise ValueError(f"bad grid range {text!r}")
    count = int((b - a) / s + 1e-9) + 1
    return "normalized", tuple(a + i * s for i in range(count))


def _cmd_dist(args: argparse.Namespace) -> int:
    k = args.k if args.k is not None else min_k_for_spec(args.spec)
    dist = parse_dist_spec(args.spec, k)
    _echo(f"dist: spec={args.spec} k={k} max_degree={dist.max_degree} mean={dist.mean_degree!r}")
    for d in range(1, dist.max_degree + 1):
        p = dist.prob(d)
        if p > 0.0:
            print(f"{d} {p!r}")
    print(f"mean={dist.mean_degree:.6f}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    kind, grid = _parse_grid(args.grid)
    if kind == "raw":
        if args.normalize not in (None, "raw"):
            raise SystemExit(2)
        normalization = "raw"
    else:
        if args.normalize == "raw":
            raise SystemExit(2)
        normalization = args.normalize or ("exact" if args.alpha == 1.0 else "almost_exact")
    cfg = harness.ExperimentConfig(
        k=args.k,
        dist_spec=args.dist,
        decoder=args.decoder,
        alpha=args.alpha,
        grid=grid,
        normalization=normalization,
        trials=args.trials,
        master_seed=args.seed,
    )
    resolved = " ".join(str(n) for n, _ in cfg.resolve_grid())
    _echo(
        f"simulate: k={cfg.k} dist={cfg.dist_spec} dbar={cfg.dbar!r} decoder={cfg.decoder}"
        f" alpha={cfg.alpha!r} delta={cfg.delta!r} normalization={cfg.normalization}"
        f" grid={args.grid} n=[{resolved}] trials={cfg.trials} seed={cfg.master_seed}"
        f" workers={args.workers}"
    )
    table = harness.run_experiment(cfg, workers=args.workers)
    if args.out:
        harness.write_csv(table, cfg, args.out)
    else:
        harness.write_csv(table, cfg, sys.stdout)
    return 0


def _isolation(args: argparse.Namespace) -> float:
    from .queries import isolation_probability

    return isolation_probability(args.k, args.n, args.dbar)


def _cmd_analytic(args: argparse.Namespace) -> int:
    q = args.quantity
    rows: list[tuple] | None = None
    if q == "isolation":
        value = _isolation(args)
        params = {"k": args.k, "n": args.n, "dbar": args.dbar}
    elif q == "union-bound":
        dist = parse_dist_spec(args.dist, args.k)
        fn = (
            oracles.ml_error_union_bound_exact
            if args.method == "exact"
            else oracles.ml_error_union_bound_relaxed
        )
        value = fn(args.k, args.n, dist)
        params = {"k": args.k, "n": args.n, "dist": args.dist, "method": args.method}
    elif q == "sigma-s":
        dist = parse_dist_spec(args.dist, args.k)
        value = oracles.detection_floor(args.k, args.s, dist)
        params = {"k": args.k, "s": args.s, "dist": args.dist}
    elif q == "release-q":
        value = oracles.release_prob_by_degree(args.k, args.d, args.L)
        params = {"k": args.k, "d": args.d, "L": args.L}
    elif q == "release-r":
        dist = parse_dist_spec(args.dist, args.k)
        if args.L is not None:
            value = oracles.release_prob(args.k, dist, args.L)
            params = {"k": args.k, "dist": args.dist, "L": args.L}
        else:
            rows = [(L, oracles.release_prob(args.k, dist, L)) for L in range(1, args.k + 1)]
            value = None
            params = {"k": args.k, "dist": args.dist, "L": "1..k"}
    elif q == "fano":
        value = oracles.fano_lower_bound(args.k, args.delta)
        params = {"k": args.k, "delta": args.delta}
    elif q == "coupon":
        value = oracles.coupon_expected_samples(args.k, args.delta)
        params = {"k": args.k, "delta": args.delta}
    elif q == "min-n-isolation":
        value = oracles.min_n_for_isolation(args.k, args.dbar, args.p)
        params = {"k": args.k, "dbar": args.dbar, "p": args.p}
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(q)
    _echo("analytic: " + " ".join(f"{key}={val}" for key, val in [("quantity", q), *params.items()]))
    if rows is not None:
        if args.format == "json":
            print(json.dumps({"quantity": q, "params": params, "rows": rows}))
        else:
            print("L,r")
            for L, r in rows:
                print(f"{L},{r!r}")
    else:
        if args.format == "json":
            print(json.dumps({"quantity": q, "params": params, "value": value}))
        else:
            print(repr(value))
    return 0


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    _echo(f"oracle-check: max_k={args.max_k}")
    problems = oracles.run_oracle_checks(args.max_k)
    if problems:
        for p in problems:
            print(f"VIOLATION: {p}", file=sys.stderr)
        return 1
    print(f"oracle-check: all exact-arithmetic sweeps passed (max_k={args.max_k})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paritylab",
        description="Design parity queries, decode them, and evaluate the analytic oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="print a distribution's pmf and mean degree")
    p_dist.add_argument("--spec", required=True, help="distribution spec, e.g. soliton:D=30")
    p_dist.add_argument("--k", type=int, default=None, help="number of variables (default: minimal)")
    p_dist.set_defaults(func=_cmd_dist)

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo sweep and write CSV")
    p_sim.add_argument("--k", type=int, required=True)
    p_sim.add_argument("--dist", required=True, help="distribution spec string")
    p_sim.add_argument("--decoder", choices=("ml", "bp"), required=True)
    p_sim.add_argument("--alpha", type=float, default=1.0, help="target recovered fraction")
    p_sim.add_argument("--grid", required=True, help="'a:b:s' normalized range or 'n=1,2,3'")
    p_sim.add_argument("--normalize", choices=("exact", "almost_exact", "raw"), default=None)
    p_sim.add_argument("--trials", type=int, default=1000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p_sim.add_argument("--workers", type=int, default=0, help="worker processes (0 = auto)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_an = sub.add_parser("analytic", help="evaluate a closed-form quantity")
    an_sub = p_an.add_subparsers(dest="quantity", required=True)

    def _an(name: str, **flags: dict) -> argparse.ArgumentParser:
        p = an_sub.add_parser(name)
        for flag, spec in flags.items():
            p.add_argument(flag, **spec)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(func=_cmd_analytic)
        return p

    _an(
        "isolation",
        **{
            "--k": dict(type=int, required=True),
            "--n": dict(type=int, required=True),
            "--dbar": dict(type=float, required=True),
        },
    )
    _an(
        "union-bound",
        **{
            "--k": dict(type=int, required=True),
            "--n": dict(type=int, required=True),
            "--dist": dict(required=True),
            "--method": dict(choices=("exact", "relaxed"), default="exact"),
        },
    )
    _an(
        "sigma-s",
        **{
            "--k": dict(type=int, required=True),
            "--s": dict(type=int, required=True),
            "--dist": dict(required=True),
        },
    )
    _an(
        "release-q",
        **{
            "--k": dict(type=int, required=True),
            "--d": dict(type=int, required=True),
            "--L": dict(type=int, required=True),
        },
    )
    _an(
        "release-r",
        **{
            "--k": dict(type=int, required=True),
            "--dist": dict(required=True),
            "--L": dict(type=int, default=None),
        },
    )
    _an(
        "fano",
        **{
            "--k": dict(type=int, required=True),
            "--delta": dict(type=float, required=True),
        },
    )
    _an(
        "coupon",
        **{
            "--k": dict(type=int, required=True),
            "--delta": dict(type=float, required=True),
        },
    )
    _an(
        "min-n-isolation",
        **{
            "--k": dict(type=int, required=True),
            "--dbar": dict(type=float, required=True),
            "--p": dict(type=float, required=True),
        },
    )

    p_oc = sub.add_parser("oracle-check", help="run the exact-arithmetic self-check sweeps")
    p_oc.add_argument("--max-k", type=int, default=12, dest="max_k")
    p_oc.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except BrokenPipeError:
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
