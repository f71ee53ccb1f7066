"""Random parity-query sets over k binary variables and their noiseless answers.

A query is a subset of variable indices (1-based, sorted); its answer is the
XOR of the variables it touches. Queries are i.i.d.: a degree is drawn from a
DegreeDistribution, then a uniform subset of that size is drawn without
replacement. Whole-query duplicates are allowed by design.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .degrees import DegreeDistribution, sample_degrees


@dataclass
class QuerySet:
    """n index-subsets of {1..k}; row i is the support of query i.

    Immutable after construction (cached flattened views assume this).
    """

    k: int
    queries: list[tuple[int, ...]]

    def __post_init__(self) -> None:
        for q in self.queries:
            if len(q) == 0:
                raise ValueError("empty query subset")
            prev = 0
            for j in q:
                if not prev < j <= self.k:
                    raise ValueError(f"query {q!r} is not a sorted subset of 1..{self.k}")
                prev = j

    @property
    def n(self) -> int:
        return len(self.queries)

    @cached_property
    def _flat(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(0-based flat indices, per-query lengths, start offsets)."""
        lens = np.fromiter((len(q) for q in self.queries), dtype=np.int64, count=self.n)
        total = int(lens.sum())
        flat = np.fromiter((j for q in self.queries for j in q), dtype=np.int64, count=total)
        flat -= 1
        offsets = np.zeros(self.n, dtype=np.int64)
        if self.n > 1:
            np.cumsum(lens[:-1], out=offsets[1:])
        return flat, lens, offsets

    def dump(self) -> str:
        """Debug text form: one line per query, space-separated 1-based indices."""
        return "\n".join(" ".join(str(j) for j in q) for q in self.queries)


@dataclass(eq=False)
class AnswerVector:
    """Answer bits y_i, one per query."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.bits, dtype=np.uint8)
        if b.ndim != 1 or not np.all(b <= 1):
            raise ValueError("answers must be a flat 0/1 vector")
        b.setflags(write=False)
        self.bits = b

    def __len__(self) -> int:
        return int(self.bits.shape[0])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AnswerVector) and np.array_equal(self.bits, other.bits)


def generate_queries(
    k: int, n: int, dist: DegreeDistribution, rng: np.random.Generator
) -> QuerySet:
    """Draw n i.i.d. queries: degree from `dist`, then a uniform subset.

    Subsets use Floyd's sampling (exactly uniform over all C(k, d) subsets,
    O(d) draws per query). Queries sharing a degree are batched so the random
    draws vectorize; the stream consumption order (degree vector first, then
    groups in increasing degree) is fixed and part of the determinism contract.
    """
    if dist.k != k:
        raise ValueError(f"distribution is over k={dist.k}, expected {k}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return QuerySet(k=k, queries=[])
    degrees = sample_degrees(dist, rng, n)
    queries: list[tuple[int, ...] | None] = [None] * n
    for d in np.unique(degrees):
        pos = np.nonzero(degrees == d)[0]
        d = int(d)
        lows = np.arange(k - d + 1, k + 1, dtype=np.int64)
        # draws[i, j] is uniform on 1..(k-d+1+j); one vectorized call per group
        draws = rng.integers(1, lows + 1, size=(len(pos), d), endpoint=False)
        for row, qi in enumerate(pos):
            chosen: set[int] = set()
            for j, t in zip(range(k - d + 1, k + 1), draws[row]):
                t = int(t)
                chosen.add(j if t in chosen else t)
            queries[qi] = tuple(sorted(chosen))
    return QuerySet(k=k, queries=queries)  # type: ignore[arg-type]


def _as_bits(x: Sequence[int] | np.ndarray, k: int, what: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.uint8)
    if arr.shape != (k,):
        raise ValueError(f"{what} must have length {k}, got shape {arr.shape}")
    if not np.all(arr <= 1):
        raise ValueError(f"{what} must be 0/1 valued")
    return arr


def answer_queries(qs: QuerySet, x: Sequence[int] | np.ndarray) -> AnswerVector:
    """Noiseless answers: y_i = XOR of x over query i's subset."""
    xb = _as_bits(x, qs.k, "x")
    if qs.n == 0:
        return AnswerVector(bits=np.zeros(0, dtype=np.uint8))
    flat, _, offsets = qs._flat
    sums = np.add.reduceat(xb[flat].astype(np.int64), offsets)
    return AnswerVector(bits=(sums & 1).astype(np.uint8))


def count_isolated(qs: QuerySet, k: int) -> int:
    """Number of variables in 1..k touched by no query."""
    if k != qs.k:
        raise ValueError(f"k mismatch: {k} vs QuerySet.k={qs.k}")
    if qs.n == 0:
        return k
    flat, _, _ = qs._flat
    touched = np.bincount(flat, minlength=k)
    return int(k - np.count_nonzero(touched))


def isolation_probability(k: int, n: int, dbar: float) -> float:
    """Probability a fixed variable is touched by none of n i.i.d. queries.

    Equals (1 - dbar/k)^n when each query misses a fixed variable with
    probability 1 - d/k given its degree d.
    """
    if not 0 <= dbar <= k:
        raise ValueError(f"need 0 <= dbar <= k, got dbar={dbar}, k={k}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    return float((1.0 - dbar / k) ** n)
