"""Closed-form quantities behind the query designs, in exact or high-precision form.

Everything combinatorial is evaluated in big-integer / rational arithmetic and
converted to float only at the interface, so these functions can serve as
ground-truth oracles for the samplers and decoders. Bound checks return a
BoundReport; its `holds` flag is lhs <= rhs except where a function documents
an equality check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Union

import numpy as np

from .degrees import DegreeDistribution, harmonic, make_adjusted_soliton, make_degenerate, make_soliton

Number = Union[int, float, Fraction]

#: Release-probability floor constant: r(L) >= RELEASE_FLOOR_CONSTANT / k is the
#: checkable endpoint of the guaranteed open interval (1/2, 1 - 1/e).
RELEASE_FLOOR_CONSTANT = 0.5


@dataclass
class BoundReport:
    """One evaluated inequality (or identity): holds iff lhs <= rhs (== for identities)."""

    params: dict
    lhs: Number
    rhs: Number
    holds: bool


# ---------------------------------------------------------------------------
# Even-overlap counts: a random degree-d query cancels on a weight-s flip
# pattern exactly when it meets the flipped coordinates an even number of times.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def even_overlap_count(k: int, s: int, d: int) -> int:
    """Number of d-subsets of 1..k meeting a fixed s-subset in an even count."""
    if not (0 <= s <= k and 1 <= d <= k):
        raise ValueError(f"need 0 <= s <= k and 1 <= d <= k, got k={k}, s={s}, d={d}")
    return sum(comb(s, i) * comb(k - s, d - i) for i in range(0, d + 1, 2))


def _parity_cancel_frac(k: int, s: int, d: int) -> Fraction:
    return Fraction(even_overlap_count(k, s, d), comb(k, d))


def parity_cancel_prob(k: int, s: int, d: int) -> float:
    """Probability a uniform degree-d query XORs to 0 across a weight-s flip."""
    return even_overlap_count(k, s, d) / comb(k, d)


def even_overlap_bound(k: int, s: int, d: int) -> BoundReport:
    """Case-split upper bound on the even-overlap count, checked exactly.

    With kappa(s) = (k-s+1)/(2s+1) (after replacing s by k-s when s > k/2):
    for d <= k/2 the count is at most (1 - 2sd/(5(k-d+1)))*C(k,d) when
    d < kappa and (4/5)*C(k,d) otherwise; for d > k/2 the mirrored bound uses
    (d+1)/(k-d) and the condition d > k - kappa.
    """
    if not (1 <= s <= k - 1 and 1 <= d <= k - 1):
        raise ValueError(f"need 1 <= s,d <= k-1, got k={k}, s={s}, d={d}")
    lhs = even_overlap_count(k, s, d)
    s_eff = k - s if 2 * s > k else s
    kappa = Fraction(k - s_eff + 1, 2 * s_eff + 1)
    if 2 * d <= k:
        if d < kappa:
            coeff = 1 - Fraction(2 * s_eff * d, 5 * (k - d + 1))
        else:
            coeff = Fraction(4, 5)
    else:
        if d > k - kappa:
            coeff = 1 - Fraction(2 * s_eff * (k - d), 5 * (d + 1))
        else:
            coeff = Fraction(4, 5)
    rhs = coeff * comb(k, d)
    return BoundReport(params={"k": k, "s": s, "d": d}, lhs=lhs, rhs=rhs, holds=lhs <= rhs)


def detection_floor(k: int, s: int, dist: DegreeDistribution) -> float:
    """Per-query detection floor for weight-s flips (the exponent driving the
    relaxed ambiguity bound).

    Splits degrees at kappa(s) = (k-s+1)/(2s+1): the middle band contributes
    its mass / 5, the tails contribute (2s/5) * d*w/(k-d+1) resp.
    (2s/5) * (k-d)*w/(d+1).
    """
    if dist.k != k:
        raise ValueError(f"distribution is over k={dist.k}, expected {k}")
    if not 1 <= s <= k // 2:
        raise ValueError(f"need 1 <= s <= k/2, got s={s}, k={k}")
    kc = math.ceil(Fraction(k - s + 1, 2 * s + 1))
    probs = dist.probs
    mid = float(probs[max(kc, 1) - 1 : max(k - kc, 0)].sum())
    low = sum(d * float(probs[d - 1]) / (k - d + 1) for d in range(1, min(kc - 1, k) + 1))
    high = sum((k - d) * float(probs[d - 1]) / (d + 1) for d in range(max(k - kc + 1, 1), k + 1))
    return mid / 5.0 + (2.0 * s / 5.0) * (low + high)


def ml_error_union_bound_exact(k: int, n: int, dist: DegreeDistribution) -> float:
    """Union bound on the ambiguity probability: sum over flip weights s of
    C(k,s) * (per-query cancel probability)^n, accumulated in the log domain.
    """
    if dist.k != k:
        raise ValueError(f"distribution is over k={dist.k}, expected {k}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    support = np.nonzero(dist.probs)[0] + 1
    total = 0.0
    for s in range(1, k + 1):
        p_s = 0.0
        for d in support:
            d = int(d)
            p_s += float(dist.probs[d - 1]) * (even_overlap_count(k, s, d) / comb(k, d))
        if p_s > 0.0:
            total += math.exp(math.log(comb(k, s)) + n * math.log(p_s))
    return total


def ml_error_union_bound_relaxed(k: int, n: int, dist: DegreeDistribution) -> float:
    """Detection-floor relaxation of the ambiguity union bound:
    2 * sum_{s <= k/2} C(k,s) * exp(-n * detection_floor(k, s, dist)).
    """
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    total = 0.0
    for s in range(1, k // 2 + 1):
        total += math.exp(math.log(comb(k, s)) - n * detection_floor(k, s, dist))
    return 2.0 * total


# ---------------------------------------------------------------------------
# Peeling release probabilities. q(d, L): probability a degree-d query is
# released exactly when L variables remain unprocessed, under a uniformly
# random processing order of all k variables.
# ---------------------------------------------------------------------------


def _release_q_frac(k: int, d: int, L: int) -> Fraction:
    if not (1 <= d <= k and 1 <= L <= k):
        raise ValueError(f"need 1 <= d, L <= k, got k={k}, d={d}, L={L}")
    if d == 1:
        return Fraction(1) if L == k else Fraction(0)
    if L > k - d + 1:
        return Fraction(0)
    num = d * (d - 1) * L
    for j in range(0, d - 2):
        num *= k - (L + 1) - j
    den = 1
    for j in range(0, d):
        den *= k - j
    return Fraction(num, den)


def release_prob_by_degree(k: int, d: int, L: int) -> float:
    """q(d, L) as a float; zero outside the feasible (d, L) region."""
    return float(_release_q_frac(k, d, L))


def release_prob_by_degree_enum(k: int, d: int, L: int) -> Fraction:
    """Brute-force q(d, L): enumerate every d-subset of processing positions
    and read off where the residual degree first drops to one. Independent of
    the product formula; exponential in k.
    """
    if not (1 <= d <= k and 1 <= L <= k):
        raise ValueError(f"need 1 <= d, L <= k, got k={k}, d={d}, L={L}")
    if d == 1:
        return Fraction(1) if L == k else Fraction(0)
    count = 0
    for positions in itertools.combinations(range(1, k + 1), d):
        # Released when the (d-1)-th neighbor is processed, i.e. after the
        # second-largest position; k minus that position variables remain.
        deg = d
        released_at = None
        for t in positions:
            deg -= 1
            if deg == 1:
                released_at = k - t
                break
        if released_at == L:
            count += 1
    return Fraction(count, comb(k, d))


def release_prob(k: int, dist: DegreeDistribution, L: int) -> float:
    """Overall release probability r(L) = sum_d w_d * q(d, L)."""
    if dist.k != k:
        raise ValueError(f"distribution is over k={dist.k}, expected {k}")
    support = np.nonzero(dist.probs)[0] + 1
    return float(sum(dist.probs[d - 1] * release_prob_by_degree(k, int(d), L) for d in support))


def soliton_release_prob_frac(k: int, D: int, L: int) -> Fraction:
    """Exact-rational r(L) for the max-degree-D soliton pmf."""
    if not 2 <= D <= k:
        raise ValueError(f"need 2 <= D <= k, got D={D}, k={k}")
    total = Fraction(1, D) * _release_q_frac(k, 1, L)
    for d in range(2, D + 1):
        total += Fraction(1, d * (d - 1)) * _release_q_frac(k, d, L)
    return total


def release_prob_soliton_closed(k: int, D: int, L: int) -> float:
    """Closed form of r(L) for the soliton pmf on 1 <= L <= k - D:
    (1/k) * (1 - prod_{i=1}^{D-1} (1 - L/(k-i))).
    """
    if not 2 <= D <= k:
        raise ValueError(f"need 2 <= D <= k, got D={D}, k={k}")
    if not 1 <= L <= k - D:
        raise ValueError(f"closed form needs 1 <= L <= k-D, got L={L}, k={k}, D={D}")
    prod = 1.0
    for i in range(1, D):
        prod *= 1.0 - L / (k - i)
    return (1.0 - prod) / k


@dataclass
class ReleaseProfile:
    """r(L) for L = 1..k under the max-degree-D soliton pmf."""

    k: int
    D: int
    values: np.ndarray

    def value_at(self, L: int) -> float:
        if not 1 <= L <= self.k:
            raise ValueError(f"need 1 <= L <= k, got L={L}")
        return float(self.values[L - 1])


def release_profile(k: int, D: int) -> ReleaseProfile:
    """Assemble the full r(L) profile: closed form up to k-D, the exact 1/k
    plateau on k-D+1..k-1, and the degree-1 mass at L=k.
    """
    if not 2 <= D <= k:
        raise ValueError(f"need 2 <= D <= k, got D={D}, k={k}")
    values = np.empty(k, dtype=np.float64)
    for L in range(1, k - D + 1):
        values[L - 1] = release_prob_soliton_closed(k, D, L)
    values[k - D : k - 1] = 1.0 / k
    values[k - 1] = 1.0 / D
    return ReleaseProfile(k=k, D=D, values=values)


def release_floor_holds(k: int, D: int, delta: float) -> bool:
    """Check min_{L in [delta*k, k]} r(L) >= RELEASE_FLOOR_CONSTANT / k for the
    soliton pmf with D = round(1/delta)."""
    if D != round(1.0 / delta):
        raise ValueError(f"need D = round(1/delta), got D={D}, 1/delta={1.0 / delta!r}")
    if delta * k < 1.0:
        raise ValueError(f"need delta*k >= 1, got {delta * k!r}")
    L_lo = math.ceil(delta * k - 1e-9)
    profile = release_profile(k, D)
    return float(profile.values[L_lo - 1 :].min()) >= RELEASE_FLOOR_CONSTANT / k


def telescoping_sum_identity(a: int, b: int) -> BoundReport:
    """Exact check of sum_{j=1}^{b} prod_{i=0}^{j-1} (b-i)/(a-i) == b/(a-b+1).

    holds means exact equality of both sides as rationals.
    """
    if not (1 <= b <= a):
        raise ValueError(f"need a >= b >= 1, got a={a}, b={b}")
    term = Fraction(1)
    lhs = Fraction(0)
    for i in range(b):
        term *= Fraction(b - i, a - i)
        lhs += term
    rhs = Fraction(b, a - b + 1)
    return BoundReport(params={"a": a, "b": b}, lhs=lhs, rhs=rhs, holds=lhs == rhs)


# ---------------------------------------------------------------------------
# Scalar analytic quantities.
# ---------------------------------------------------------------------------


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) bit in nats; 0 at the endpoints."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"need 0 <= p <= 1, got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)


def fano_lower_bound(k: int, delta: float) -> float:
    """Information-theoretic floor on the number of answers needed to recover
    all but a delta fraction: k * (1 - H_B(delta) - delta)."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"need 0 < delta < 1, got {delta!r}")
    return k * (1.0 - binary_entropy(delta) - delta)


def harmonic_log_gap(D: int) -> float:
    """H_D - log D; increases toward the Euler-Mascheroni constant."""
    if D < 1:
        raise ValueError(f"need D >= 1, got {D}")
    return harmonic(D) - math.log(D)


def coupon_expected_samples(k: int, delta: float) -> float:
    """Expected singleton draws to fill (1-delta)k of k bins:
    k * (H_k - H_m) with m = round(delta*k) clamped to >= 1."""
    if not 1.0 / k <= delta < 1.0:
        raise ValueError(f"need 1/k <= delta < 1, got delta={delta!r}, k={k}")
    m = max(1, round(delta * k))
    return k * (harmonic(k) - harmonic(m))


def min_n_for_isolation(k: int, dbar: float, p_target: float) -> int:
    """Smallest n with (1 - dbar/k)^n <= p_target."""
    if not 0.0 < p_target <= 1.0:
        raise ValueError(f"need 0 < p_target <= 1, got {p_target!r}")
    if not 0.0 < dbar <= k:
        raise ValueError(f"need 0 < dbar <= k, got dbar={dbar!r}, k={k}")
    if p_target >= 1.0:
        return 0
    base = 1.0 - dbar / k
    if base == 0.0:
        return 1
    n = max(0, math.ceil(math.log(p_target) / math.log(base)))
    while base**n > p_target:
        n += 1
    while n > 0 and base ** (n - 1) <= p_target:
        n -= 1
    return n


# ---------------------------------------------------------------------------
# Self-check sweeps (exact arithmetic; used by the CLI's oracle-check).
# ---------------------------------------------------------------------------


def _release_histogram_enum(k: int, d: int) -> dict[int, int]:
    """Release-position counts over all d-subsets (see release_prob_by_degree_enum)."""
    hist: dict[int, int] = {}
    if d == 1:
        hist[k] = k
        return hist
    for positions in itertools.combinations(range(1, k + 1), d):
        deg = d
        for t in positions:
            deg -= 1
            if deg == 1:
                hist[k - t] = hist.get(k - t, 0) + 1
                break
    return hist


def _check_distributions(k: int) -> list[DegreeDistribution]:
    dists = [make_degenerate(1, k), make_degenerate(max(1, k // 2), k), make_degenerate(k, k)]
    if k >= 3:
        for D in {2, min(5, k), k}:
            dists.append(make_soliton(D, k))
        h = harmonic(min(5, k))
        dists.append(make_adjusted_soliton(min(5, k), k, 1.0 + (h - 1.0) / 2.0))
    return dists


def run_oracle_checks(max_k: int) -> list[str]:
    """Run the exact-arithmetic cross-validation sweeps; return violations.

    Sweeps: the telescoping identity (a <= 50); product-form q(d, L) against
    brute-force enumeration (k <= min(max_k, 12)); the even-overlap bound over
    every (s, d) for k <= max_k; the band inequality
    sum_d w_d*I_d/C(k,d) <= 1 - detection_floor for k <= min(max_k, 40); and
    closed-form/plateau consistency of r(L) for k = min(max_k, 200).
    """
    problems: list[str] = []

    for a in range(1, 51):
        for b in range(1, a + 1):
            rep = telescoping_sum_identity(a, b)
            if not rep.holds:
                problems.append(f"telescoping identity fails at a={a}, b={b}")

    for k in range(2, min(max_k, 12) + 1):
        for d in range(1, k + 1):
            hist = _release_histogram_enum(k, d)
            c = comb(k, d)
            for L in range(1, k + 1):
                if Fraction(hist.get(L, 0), c) != _release_q_frac(k, d, L):
                    problems.append(f"release probability mismatch at k={k}, d={d}, L={L}")

    for k in range(2, max_k + 1):
        for s in range(1, k):
            for d in range(1, k):
                rep = even_overlap_bound(k, s, d)
                if not rep.holds:
                    problems.append(f"even-overlap bound fails at k={k}, s={s}, d={d}")

    for k in range(2, min(max_k, 40) + 1):
        for dist in _check_distributions(k):
            for s in range(1, k // 2 + 1):
                cancel = sum(
                    float(dist.probs[d - 1]) * (even_overlap_count(k, s, d) / comb(k, d))
                    for d in range(1, k + 1)
                    if dist.probs[d - 1] > 0
                )
                if cancel > 1.0 - detection_floor(k, s, dist) + 1e-12:
                    problems.append(f"band inequality fails at k={k}, s={s}")

    k = max(3, min(max_k, 200))
    D = max(2, min(k // 10, k))
    for L in range(1, k - D + 1):
        closed = release_prob_soliton_closed(k, D, L)
        direct = float(soliton_release_prob_frac(k, D, L))
        if abs(closed - direct) > 1e-12:
            problems.append(f"closed-form release probability mismatch at k={k}, D={D}, L={L}")
    for L in range(k - D + 1, k):
        if soliton_release_prob_frac(k, D, L) != Fraction(1, k):
            problems.append(f"release plateau not exactly 1/k at k={k}, D={D}, L={L}")
    if soliton_release_prob_frac(k, D, k) != Fraction(1, D):
        problems.append(f"release probability at L=k is not 1/D for k={k}, D={D}")

    return problems
