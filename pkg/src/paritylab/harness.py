"""Deterministic, parallel Monte Carlo estimation of decoding-error rates.

Each trial derives an independent RNG stream from (master_seed, n, trial
index) through a fixed 64-bit mix, so results are bit-identical however the
trials are scheduled across workers. Error criteria: ML errs unless the
solution is unique and equals the planted truth; peeling errs when fewer than
ceil(alpha*k) variables resolve to their true values.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, TextIO

import numpy as np

from .degrees import DegreeDistribution, parse_dist_spec
from .gf2 import solve
from .peeling import peel
from .queries import answer_queries, generate_queries

_MASK64 = (1 << 64) - 1
_CHUNK_TRIALS = 256

CSV_COLUMNS = [
    "k",
    "dist",
    "dbar",
    "decoder",
    "alpha",
    "n",
    "n_norm",
    "trials",
    "errors",
    "p_hat",
    "stderr",
    "seed",
]


def splitmix64(z: int) -> int:
    """One SplitMix64 step; the mixing primitive for seed derivation."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed: int, n: int, trial: int) -> int:
    """Per-trial stream seed: a fixed hash of (master_seed, n, trial)."""
    h = splitmix64(master_seed & _MASK64)
    h = splitmix64(h ^ (n & _MASK64))
    h = splitmix64(h ^ (trial & _MASK64))
    return h


def trial_rng(master_seed: int, n: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(mix_seed(master_seed, n, trial)))


@lru_cache(maxsize=64)
def _dist_for(dist_spec: str, k: int) -> DegreeDistribution:
    return parse_dist_spec(dist_spec, k)


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo sweep: a decoder, a distribution, and a grid of n values.

    `grid` holds normalized multipliers (floats) unless normalization is
    "raw", in which case it holds explicit sample counts. Normalized grids
    resolve to n = round(t * k*log(k)/dbar) ("exact") or
    n = round(t * k*log(1/delta)/dbar) ("almost_exact").
    """

    k: int
    dist_spec: str
    decoder: str
    alpha: float = 1.0
    grid: tuple = ()
    normalization: str = "exact"
    trials: int = 1
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.decoder not in ("ml", "bp"):
            raise ValueError(f"decoder must be 'ml' or 'bp', got {self.decoder!r}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha!r}")
        if self.decoder == "ml" and self.alpha != 1.0:
            raise ValueError("the ML decoder targets exact recovery; alpha must be 1.0")
        if self.normalization not in ("exact", "almost_exact", "raw"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.normalization == "almost_exact" and self.delta <= 0.0:
            raise ValueError("almost_exact normalization needs alpha < 1")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if len(self.grid) == 0:
            raise ValueError("grid must be nonempty")
        if self.normalization == "raw" and any(int(g) != g or g < 0 for g in self.grid):
            raise ValueError("raw grid entries must be nonnegative integers")
        _dist_for(self.dist_spec, self.k)  # validates spec and k

    @property
    def delta(self) -> float:
        return 1.0 - self.alpha

    @property
    def dist(self) -> DegreeDistribution:
        return _dist_for(self.dist_spec, self.k)

    @property
    def dbar(self) -> float:
        return self.dist.mean_degree

    @property
    def norm_scale(self) -> float:
        """Divisor mapping raw n to the normalized axis."""
        if self.normalization == "almost_exact" or (
            self.normalization == "raw" and self.alpha < 1.0
        ):
            return self.k * math.log(1.0 / self.delta) / self.dbar
        return self.k * math.log(self.k) / self.dbar

    def resolve_grid(self) -> list[tuple[int, float]]:
        """Concrete (n, n_normalized) pairs for every grid entry."""
        scale = self.norm_scale
        points = []
        for g in self.grid:
            n = int(g) if self.normalization == "raw" else int(round(g * scale))
            points.append((n, n / scale))
        return points


@dataclass
class ResultRow:
    n: int
    n_norm: float
    errors: int
    trials: int
    p_hat: float
    stderr: float
    wall_time: float


@dataclass
class ResultTable:
    config: ExperimentConfig
    rows: list[ResultRow] = field(default_factory=list)


def run_trial(
    k: int,
    dist: DegreeDistribution,
    decoder: str,
    alpha: float,
    n: int,
    seed: int,
) -> bool:
    """One planted-truth decode; returns True on a decoding error."""
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.integers(0, 2, size=k, dtype=np.uint8)
    qs = generate_queries(k, n, dist, rng)
    y = answer_queries(qs, x)
    if decoder == "ml":
        out = solve(qs, y, k)
        return not (out.is_unique and np.array_equal(out.solution, x))
    res = peel(qs, y, k)
    need = math.ceil(alpha * k - 1e-9)
    correct = int(np.count_nonzero((res.resolved_mask == 1) & (res.values == x)))
    return correct < need


def _run_chunk(args: tuple) -> tuple[int, int, float]:
    dist_spec, k, decoder, alpha, point_idx, n, master_seed, t_lo, t_hi = args
    dist = _dist_for(dist_spec, k)
    start = time.perf_counter()
    errors = 0
    for t in range(t_lo, t_hi):
        if run_trial(k, dist, decoder, alpha, n, mix_seed(master_seed, n, t)):
            errors += 1
    return point_idx, errors, time.perf_counter() - start


def run_experiment(cfg: ExperimentConfig, workers: int = 0) -> ResultTable:
    """Estimate the error rate at every grid point; bit-identical for any
    worker count (wall_time excepted, and excluded from the CSV form)."""
    if workers <= 0:
        workers = os.cpu_count() or 1
    points = cfg.resolve_grid()
    tasks = []
    for idx, (n, _) in enumerate(points):
        for lo in range(0, cfg.trials, _CHUNK_TRIALS):
            hi = min(lo + _CHUNK_TRIALS, cfg.trials)
            tasks.append(
                (cfg.dist_spec, cfg.k, cfg.decoder, cfg.alpha, idx, n, cfg.master_seed, lo, hi)
            )
    if workers == 1:
        outcomes = [_run_chunk(t) for t in tasks]
    else:
        with multiprocessing.Pool(processes=workers) as pool:
            outcomes = pool.map(_run_chunk, tasks)
    errors = [0] * len(points)
    elapsed = [0.0] * len(points)
    for idx, errs, dt in outcomes:
        errors[idx] += errs
        elapsed[idx] += dt
    table = ResultTable(config=cfg)
    for idx, (n, n_norm) in enumerate(points):
        p_hat = errors[idx] / cfg.trials
        stderr = math.sqrt(p_hat * (1.0 - p_hat) / cfg.trials)
        table.rows.append(
            ResultRow(
                n=n,
                n_norm=n_norm,
                errors=errors[idx],
                trials=cfg.trials,
                p_hat=p_hat,
                stderr=stderr,
                wall_time=elapsed[idx],
            )
        )
    return table


def write_csv(table: ResultTable, cfg: ExperimentConfig, out: str | os.PathLike | TextIO) -> None:
    """Write the documented CSV schema (one row per grid point)."""

    def _write(fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in table.rows:
            writer.writerow(
                [
                    cfg.k,
                    cfg.dist_spec,
                    repr(cfg.dbar),
                    cfg.decoder,
                    repr(cfg.alpha),
                    row.n,
                    repr(row.n_norm),
                    row.trials,
                    row.errors,
                    repr(row.p_hat),
                    repr(row.stderr),
                    cfg.master_seed,
                ]
            )

    if hasattr(out, "write"):
        _write(out)  # type: ignore[arg-type]
    else:
        try:
            with open(out, "w", newline="") as fh:
                _write(fh)
        except OSError as exc:
            raise OSError(f"cannot write results to {out!r}: {exc}") from exc


def read_csv_rows(path: str | os.PathLike) -> list[dict]:
    """Parse a harness CSV back into typed row dicts (validates the header)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header!r}")
        rows = []
        for rec in reader:
            rows.append(
                {
                    "k": int(rec[0]),
                    "dist": rec[1],
                    "dbar": float(rec[2]),
                    "decoder": rec[3],
                    "alpha": float(rec[4]),
                    "n": int(rec[5]),
                    "n_norm": float(rec[6]),
                    "trials": int(rec[7]),
                    "errors": int(rec[8]),
                    "p_hat": float(rec[9]),
                    "stderr": float(rec[10]),
                    "seed": int(rec[11]),
                }
            )
    return rows
