"""Exact linear solving of A x = y over GF(2) by bit-packed Gaussian elimination.

Rows are packed into 64-bit words (columns 0..k-1 hold the query indicators,
column k the answer bit), eliminated with Gauss-Jordan sweeps so a full-rank
system yields the solution directly from the pivot rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .queries import AnswerVector, QuerySet


class InconsistentSystem(RuntimeError):
    """Elimination derived 0 = 1; impossible for noiseless answers, so a harness bug."""


@dataclass
class MlOutcome:
    """Result of maximum-likelihood decoding.

    tag is "unique" (rank k; `solution` satisfies every query) or "ambiguous"
    (rank < k; no solution is emitted).
    """

    tag: str
    rank: int
    solution: Optional[np.ndarray] = None

    @property
    def is_unique(self) -> bool:
        return self.tag == "unique"


def _pack_rows(qs: QuerySet, extra_col_bits: np.ndarray | None) -> np.ndarray:
    """Pack queries (and optionally an answer column at bit index k) into uint64 words."""
    n, k = qs.n, qs.k
    ncols = k + (1 if extra_col_bits is not None else 0)
    words = (ncols + 63) // 64 if ncols else 1
    M = np.zeros((n, words), dtype=np.uint64)
    if n == 0:
        return M
    flat, lens, _ = qs._flat
    rows = np.repeat(np.arange(n, dtype=np.int64), lens)
    np.bitwise_or.at(
        M,
        (rows, flat >> 6),
        np.uint64(1) << (flat & 63).astype(np.uint64),
    )
    if extra_col_bits is not None:
        w, b = divmod(k, 64)
        M[:, w] |= extra_col_bits.astype(np.uint64) << np.uint64(b)
    return M


def _eliminate(M: np.ndarray, k: int) -> int:
    """In-place Gauss-Jordan over columns 0..k-1; returns the rank."""
    n = M.shape[0]
    r = 0
    for c in range(k):
        if r == n:
            break
        w, b = divmod(c, 64)
        mask = np.uint64(1 << b)
        below = np.nonzero(M[r:, w] & mask)[0]
        if below.size == 0:
            continue
        p = r + int(below[0])
        if p != r:
            tmp = M[r].copy()
            M[r] = M[p]
            M[p] = tmp
        hit = np.nonzero(M[:, w] & mask)[0]
        hit = hit[hit != r]
        if hit.size:
            M[hit] ^= M[r]
        r += 1
    return r


def solve(qs: QuerySet, y: AnswerVector, k: int) -> MlOutcome:
    """Solve the parity system; unique solution iff the query matrix has rank k."""
    if k != qs.k:
        raise ValueError(f"k mismatch: {k} vs QuerySet.k={qs.k}")
    if len(y) != qs.n:
        raise ValueError(f"answer length {len(y)} != number of queries {qs.n}")
    M = _pack_rows(qs, y.bits)
    rk = _eliminate(M, k)
    w, b = divmod(k, 64)
    ybit = np.uint64(1 << b)
    # Rows past the rank are zero on all variable columns; a surviving answer
    # bit there means the system encodes 0 = 1.
    if rk < qs.n and np.any(M[rk:, w] & ybit):
        raise InconsistentSystem("elimination derived 0 = 1 from supposedly noiseless answers")
    if rk < k:
        return MlOutcome(tag="ambiguous", rank=rk)
    x = ((M[:k, w] >> np.uint64(b)) & np.uint64(1)).astype(np.uint8)
    return MlOutcome(tag="unique", rank=rk, solution=x)


def rank(qs: QuerySet, k: int) -> int:
    """GF(2) rank of the query matrix."""
    if k != qs.k:
        raise ValueError(f"k mismatch: {k} vs QuerySet.k={qs.k}")
    M = _pack_rows(qs, None)
    return _eliminate(M, k)
