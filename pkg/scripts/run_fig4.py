#!/usr/bin/env python3
"""Target-fraction sweep: k=300, peeling decoder, soliton D=6 (dbar ~ 2.45),
alpha in {0.9, 0.95, 0.98}, error rate vs raw sample complexity.

Render with
  parity-render --csv results/fig4_alpha90.csv --csv results/fig4_alpha95.csv \
                --csv results/fig4_alpha98.csv --x raw --series alpha --out fig4.png
"""

from __future__ import annotations

import argparse
from pathlib import Path

from paritylab import ExperimentConfig, run_experiment, write_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--n-min", type=int, default=220)
    ap.add_argument("--n-max", type=int, default=700)
    ap.add_argument("--n-step", type=int, default=40)
    ap.add_argument("--seed", type=int, default=20500)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int, default=0)
    args = ap.parse_args()

    args.out_dir.mkdir(exist_ok=True)
    grid = tuple(range(args.n_min, args.n_max + 1, args.n_step))
    for i, alpha in enumerate((0.9, 0.95, 0.98)):
        cfg = ExperimentConfig(
            k=300, dist_spec="soliton:D=6", decoder="bp", alpha=alpha,
            grid=grid, normalization="raw", trials=args.trials, master_seed=args.seed + i,
        )
        table = run_experiment(cfg, workers=args.workers)
        out = args.out_dir / f"fig4_alpha{int(alpha * 100)}.csv"
        write_csv(table, cfg, out)
        first = next((r.n for r in table.rows if r.p_hat <= 0.1), None)
        print(f"alpha={alpha} -> {out} (first n with p_hat<=0.1: {first})")


if __name__ == "__main__":
    main()
