"""Iterative peeling decoder with full ripple instrumentation.

Degree-1 queries reveal their variable outright; processing a known variable
XORs its value out of every query touching it and removes those edges. A query
whose residual degree drops from 2 to 1 is *released* and reveals its last
variable. Decoding halts when no known-but-unprocessed variable remains or all
k variables are processed.

Instrumentation indexes events by L, the number of still-unprocessed
variables: entry t of `ripple_trace`/`release_counts` refers to L = k - t,
with t = 0 the state right after initialization (L = k).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .queries import AnswerVector, QuerySet, _as_bits


class ContradictoryAnswers(RuntimeError):
    """Two released queries imply different values for one variable (harness bug)."""


@dataclass
class PeelResult:
    """Decoder output plus the ripple/release trace.

    resolved_mask[j-1] = 1 iff variable j's value became known; values holds
    those bits (0 where unresolved). ripple_trace[t] is the count of known but
    unprocessed variables when k - t variables remain unprocessed;
    release_counts[t] counts queries released at that same instant (t = 0
    counts the initial degree-1 queries).
    """

    resolved_mask: np.ndarray
    values: np.ndarray
    processed_count: int
    ripple_trace: list[int]
    release_counts: list[int]

    @property
    def k(self) -> int:
        return int(self.resolved_mask.shape[0])

    @property
    def resolved_count(self) -> int:
        return int(self.resolved_mask.sum())


def peel(qs: QuerySet, y: AnswerVector, k: int, *, schedule: str = "fifo") -> PeelResult:
    """Run peeling to its fixpoint.

    The resolved set is schedule-independent; `schedule` ("fifo" or "lifo")
    only fixes the processing order of the ripple. Simultaneous releases are
    scanned in query-index order.
    """
    if k != qs.k:
        raise ValueError(f"k mismatch: {k} vs QuerySet.k={qs.k}")
    if len(y) != qs.n:
        raise ValueError(f"answer length {len(y)} != number of queries {qs.n}")
    if schedule not in ("fifo", "lifo"):
        raise ValueError(f"unknown schedule {schedule!r}")

    n = qs.n
    residual_deg = [len(q) for q in qs.queries]
    acc = [int(b) for b in y.bits]  # y_i XOR values of processed neighbors
    nbr_xor = [0] * n  # XOR of unprocessed neighbor indices
    incident: list[list[int]] = [[] for _ in range(k + 1)]
    for i, q in enumerate(qs.queries):
        for j in q:
            incident[j].append(i)
            nbr_xor[i] ^= j

    covered = np.zeros(k + 1, dtype=bool)
    value = np.zeros(k + 1, dtype=np.uint8)
    ripple: deque[int] = deque()

    def cover(j: int, bit: int) -> None:
        if covered[j]:
            if value[j] != bit:
                raise ContradictoryAnswers(f"variable {j} implied both 0 and 1")
            return
        covered[j] = True
        value[j] = bit
        ripple.append(j)

    initial_releases = 0
    for i in range(n):
        if residual_deg[i] == 1:
            initial_releases += 1
            cover(nbr_xor[i], acc[i])

    ripple_trace = [len(ripple)]
    release_counts = [initial_releases]
    processed = 0
    while ripple and processed < k:
        j = ripple.popleft() if schedule == "fifo" else ripple.pop()
        processed += 1
        released_now = 0
        for i in incident[j]:
            if residual_deg[i] <= 0:
                continue
            acc[i] ^= value[j]
            nbr_xor[i] ^= j
            residual_deg[i] -= 1
            if residual_deg[i] == 1:
                released_now += 1
                cover(nbr_xor[i], acc[i])
        incident[j] = []
        ripple_trace.append(len(ripple))
        release_counts.append(released_now)

    return PeelResult(
        resolved_mask=covered[1:].astype(np.uint8),
        values=value[1:].copy(),
        processed_count=processed,
        ripple_trace=ripple_trace,
        release_counts=release_counts,
    )


def recovered_fraction(res: PeelResult, x_true: Sequence[int] | np.ndarray) -> float:
    """Fraction of variables resolved to the true value; unresolved count as wrong."""
    xb = _as_bits(x_true, res.k, "x_true")
    agree = np.count_nonzero((res.resolved_mask == 1) & (res.values == xb))
    return agree / res.k


def trace_csv(res: PeelResult) -> str:
    """Ripple diagnostics as CSV lines `L,rho,releases` (header included)."""
    lines = ["L,rho,releases"]
    k = res.k
    for t, (rho, rel) in enumerate(zip(res.ripple_trace, res.release_counts)):
        lines.append(f"{k - t},{rho},{rel}")
    return "\n".join(lines)


def ripple_stays_in_band(res: PeelResult, R: int, L_min: int) -> bool:
    """True iff the ripple stayed within [R, 3R] at every recorded L >= L_min."""
    if R < 1:
        raise ValueError(f"R must be >= 1, got {R}")
    k = res.k
    for t, rho in enumerate(res.ripple_trace):
        L = k - t
        if L < L_min:
            break
        if not R <= rho <= 3 * R:
            return False
    return True
