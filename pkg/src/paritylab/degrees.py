"""Query-degree distributions: construction, validation, sampling, spec strings.

A degree distribution assigns probability ``probs[d-1]`` to query degree
``d`` (the number of variables a single parity query touches), for
``d = 1..k``. The mean degree is the query difficulty of the design.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

PROB_ATOL = 1e-12
MEAN_ATOL = 1e-12


def harmonic(m: int) -> float:
    """m-th harmonic number by direct summation, smallest terms first."""
    if m < 0:
        raise ValueError(f"harmonic: need m >= 0, got {m}")
    return float(sum(1.0 / i for i in range(m, 0, -1)))


@dataclass
class DegreeDistribution:
    """Probability mass function over query degrees 1..k.

    Immutable after construction; safe to share across parallel workers.
    """

    k: int
    probs: np.ndarray
    max_degree: int = field(init=False)
    mean_degree: float = field(init=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        p = np.asarray(self.probs, dtype=np.float64)
        if p.shape != (self.k,):
            raise ValueError(f"probs must have length k={self.k}, got shape {p.shape}")
        if np.any(p < 0):
            raise ValueError("negative probability entry")
        total = float(p.sum())
        if abs(total - 1.0) > PROB_ATOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1 within {PROB_ATOL}")
        p.setflags(write=False)
        self.probs = p
        nz = np.nonzero(p)[0]
        if nz.size == 0:
            raise ValueError("distribution has empty support")
        self.max_degree = int(nz[-1]) + 1
        self.mean_degree = float(np.arange(1, self.k + 1) @ p)

    @cached_property
    def _sampler(self) -> tuple[np.ndarray, np.ndarray]:
        # Support degrees and their cumulative probabilities; the last entry is
        # pinned to 1.0 so a uniform draw in [0,1) can never fall past the table.
        support = np.nonzero(self.probs)[0] + 1
        cum = np.cumsum(self.probs[support - 1])
        cum[-1] = 1.0
        return support, cum

    def prob(self, d: int) -> float:
        """Probability of degree d (0 outside 1..k)."""
        if 1 <= d <= self.k:
            return float(self.probs[d - 1])
        return 0.0


def _build(k: int, probs: np.ndarray) -> DegreeDistribution:
    return DegreeDistribution(k=k, probs=probs)


def make_soliton(D: int, k: int) -> DegreeDistribution:
    """Soliton pmf with maximum degree D: 1/D at degree 1, 1/(d(d-1)) for 2<=d<=D.

    Mean degree equals the harmonic number H_D.
    """
    if k < 3:
        raise ValueError(f"soliton requires k >= 3, got k={k}")
    if not 2 <= D <= k:
        raise ValueError(f"soliton requires 2 <= D <= k, got D={D}, k={k}")
    probs = np.zeros(k)
    probs[0] = 1.0 / D
    d = np.arange(2, D + 1)
    probs[1:D] = 1.0 / (d * (d - 1))
    return _build(k, probs)


def make_adjusted_soliton(D: int, k: int, dbar_target: float) -> DegreeDistribution:
    """Soliton reweighted to hit a mean degree below H_D.

    Solves eta = (dbar_target - 1)/(H_D - 1), then mixes a point mass at
    degree 1 into the soliton: 1 - eta + eta/D at degree 1 and
    eta/(d(d-1)) for 2 <= d <= D.
    """
    if k < 3:
        raise ValueError(f"adjusted soliton requires k >= 3, got k={k}")
    if not 2 <= D <= k:
        raise ValueError(f"adjusted soliton requires 2 <= D <= k, got D={D}, k={k}")
    h = harmonic(D)
    if not dbar_target > 1.0:
        raise ValueError(f"dbar_target must exceed 1, got {dbar_target!r}")
    if dbar_target > h:
        raise ValueError(f"dbar_target={dbar_target!r} exceeds H_D={h!r} (eta would exceed 1)")
    eta = (dbar_target - 1.0) / (h - 1.0)
    probs = np.zeros(k)
    probs[0] = 1.0 - eta + eta / D
    d = np.arange(2, D + 1)
    probs[1:D] = eta / (d * (d - 1))
    return _build(k, probs)


def make_degenerate(d0: int, k: int) -> DegreeDistribution:
    """All queries have the same degree d0."""
    if not 1 <= d0 <= k:
        raise ValueError(f"degenerate degree must satisfy 1 <= d0 <= k, got d0={d0}, k={k}")
    probs = np.zeros(k)
    probs[d0 - 1] = 1.0
    return _build(k, probs)


def make_mixture(components: Sequence[tuple[DegreeDistribution, float]]) -> DegreeDistribution:
    """Convex combination of distributions sharing the same k."""
    if not components:
        raise ValueError("mixture needs at least one component")
    k = components[0][0].k
    weights = np.array([w for _, w in components], dtype=np.float64)
    if np.any(weights < 0):
        raise ValueError("mixture weights must be nonnegative")
    if abs(float(weights.sum()) - 1.0) > PROB_ATOL:
        raise ValueError(f"mixture weights sum to {float(weights.sum())!r}, not 1")
    probs = np.zeros(k)
    for dist, w in components:
        if dist.k != k:
            raise ValueError(f"mixture components disagree on k: {dist.k} vs {k}")
        probs += w * dist.probs
    # Renormalization is not applied: weights summing to 1 within tolerance keep
    # the pointwise combination within the constructor's own tolerance.
    return _build(k, probs)


def sample_degrees(dist: DegreeDistribution, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw `size` i.i.d. degrees by inverse CDF over the support table.

    Ties at a cumulative boundary resolve to the lower degree.
    """
    support, cum = dist._sampler
    u = rng.random(size)
    return support[np.searchsorted(cum, u, side="left")]


def sample_degree(dist: DegreeDistribution, rng: np.random.Generator) -> int:
    """Draw one degree; see sample_degrees."""
    return int(sample_degrees(dist, rng, 1)[0])


# ---------------------------------------------------------------------------
# Plain-text distribution specs (CLI surface):
#   soliton:D=30
#   adjusted:D=10,dbar=2.0
#   degenerate:d=1
#   mixture:[soliton:D=4@0.25,degenerate:d=1@0.75]
# ---------------------------------------------------------------------------


class DistSpecError(ValueError):
    """Malformed distribution spec string."""


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def _parse_params(body: str) -> dict[str, str]:
    params = {}
    for item in body.split(","):
        if "=" not in item:
            raise DistSpecError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    return params


def parse_dist_spec(spec: str, k: int) -> DegreeDistribution:
    """Build the distribution a spec string describes, over 1..k."""
    spec = spec.strip()
    if ":" not in spec:
        raise DistSpecError(f"missing ':' in distribution spec {spec!r}")
    head, body = spec.split(":", 1)
    head = head.strip()
    if head == "soliton":
        params = _parse_params(body)
        return make_soliton(D=int(params["D"]), k=k)
    if head == "adjusted":
        params = _parse_params(body)
        return make_adjusted_soliton(D=int(params["D"]), k=k, dbar_target=float(params["dbar"]))
    if head == "degenerate":
        params = _parse_params(body)
        return make_degenerate(d0=int(params["d"]), k=k)
    if head == "mixture":
        body = body.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise DistSpecError(f"mixture spec must be bracketed, got {body!r}")
        components = []
        for part in _split_top_level(body[1:-1], ","):
            part = part.strip()
            if "@" not in part:
                raise DistSpecError(f"mixture component needs spec@weight, got {part!r}")
            sub, weight = part.rsplit("@", 1)
            components.append((parse_dist_spec(sub, k), float(weight)))
        return make_mixture(components)
    raise DistSpecError(f"unknown distribution kind {head!r}")


def min_k_for_spec(spec: str) -> int:
    """Smallest k on which the spec string is admissible."""
    spec = spec.strip()
    head, _, body = spec.partition(":")
    head = head.strip()
    if head in ("soliton", "adjusted"):
        return max(3, int(_parse_params(body)["D"]))
    if head == "degenerate":
        return int(_parse_params(body)["d"])
    if head == "mixture":
        body = body.strip()[1:-1]
        return max(min_k_for_spec(part.rsplit("@", 1)[0]) for part in _split_top_level(body, ","))
    raise DistSpecError(f"unknown distribution kind {head!r}")
