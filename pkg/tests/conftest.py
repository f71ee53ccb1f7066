"""Shared helpers: random problem instances and independent brute-force oracles."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from paritylab import (
    DegreeDistribution,
    QuerySet,
    answer_queries,
    generate_queries,
    harmonic,
    make_adjusted_soliton,
    make_degenerate,
    make_soliton,
)


def random_distribution(k: int, rng: np.random.Generator) -> DegreeDistribution:
    """A haphazard mix of the supported families, for fuzzing decoders."""
    kind = rng.integers(0, 3)
    if kind == 0 or k < 3:
        return make_degenerate(int(rng.integers(1, min(k, 6) + 1)), k)
    D = int(rng.integers(2, min(k, 40) + 1))
    if kind == 1:
        return make_soliton(D, k)
    h = harmonic(D)
    target = 1.0 + float(rng.uniform(0.2, 1.0)) * (h - 1.0)
    return make_adjusted_soliton(D, k, target)


def random_instance(rng: np.random.Generator, k_max: int = 128, n_factor: float = 3.0):
    """(k, x, QuerySet, AnswerVector) with a planted truth."""
    k = int(rng.integers(2, k_max + 1))
    dist = random_distribution(k, rng)
    n = int(rng.integers(0, int(n_factor * k) + 1))
    x = rng.integers(0, 2, size=k, dtype=np.uint8)
    qs = generate_queries(k, n, dist, rng)
    y = answer_queries(qs, x)
    return k, x, qs, y


def brute_force_solutions(qs: QuerySet, y) -> list[int]:
    """All x in {0,1}^k satisfying every parity constraint (k <= ~16 only).

    Candidates are encoded as integers with bit j-1 holding x_j.
    """
    k = qs.k
    masks = [sum(1 << (j - 1) for j in q) for q in qs.queries]
    bits = [int(b) for b in y.bits]
    sols = []
    for cand in range(1 << k):
        if all((cand & m).bit_count() & 1 == b for m, b in zip(masks, bits)):
            sols.append(cand)
    return sols


def release_prob_by_order_enum(k: int, d: int, L: int) -> Fraction:
    """q(d, L) by enumerating every neighbor set x every processing order.

    The heaviest possible oracle (k! blowup): walks each full processing
    order and records where the query's residual degree first hits one.
    """
    if d == 1:
        return Fraction(1) if L == k else Fraction(0)
    count = 0
    total = 0
    for subset in itertools.combinations(range(1, k + 1), d):
        chosen = set(subset)
        for order in itertools.permutations(range(1, k + 1)):
            total += 1
            deg = d
            released_at = None
            for t, j in enumerate(order, start=1):
                if j in chosen:
                    deg -= 1
                    if deg == 1:
                        released_at = k - t
                        break
            if released_at == L:
                count += 1
    return Fraction(count, total)


def odd_overlap_count(k: int, s: int, d: int) -> int:
    """Complement of the even-overlap count, summed independently."""
    return sum(math.comb(s, i) * math.comb(k - s, d - i) for i in range(1, d + 1, 2))
