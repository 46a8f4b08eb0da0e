"""Association-rule interestingness measures over probability estimates.

Each measure is a plain function of (p_x, p_y, p_xy, conf).  Two tagged
values are first class: +infinity (conviction of an exceptionless rule)
and undefined (a 0/0 form), kept as None and never conflated with 0.
Sorting places +infinity above every finite value and undefined below
everything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .interactions import InteractionKey, ProbabilityEstimates

MEASURES = (
    "confidence",
    "support",
    "lift",
    "conviction",
    "cosine",
    "jaccard",
    "phi",
)

# invariant under swapping condition and consequence statements
SYMMETRIC_MEASURES = ("support", "lift", "cosine", "jaccard", "phi")


def confidence(e: ProbabilityEstimates) -> float | None:
    return None if e.conf is None else float(e.conf)


def support(e: ProbabilityEstimates) -> float:
    return float(e.p_xy)


def lift(e: ProbabilityEstimates) -> float | None:
    if e.p_x == 0 or e.p_y == 0:
        return None
    return float(e.p_xy / (e.p_x * e.p_y))


def conviction(e: ProbabilityEstimates) -> float | None:
    if e.conf is None:
        return None
    if e.conf == 1:
        return None if e.p_y == 1 else math.inf
    return float((1 - e.p_y) / (1 - e.conf))


def cosine(e: ProbabilityEstimates) -> float | None:
    if e.p_x == 0 or e.p_y == 0:
        return None
    return math.sqrt(float(e.p_xy * e.p_xy / (e.p_x * e.p_y)))


def jaccard(e: ProbabilityEstimates) -> float | None:
    union = e.p_x + e.p_y - e.p_xy
    if union == 0:
        return None
    return float(e.p_xy / union)


def phi(e: ProbabilityEstimates) -> float | None:
    for marginal in (e.p_x, e.p_y):
        if marginal == 0 or marginal == 1:
            return None
    num = e.p_xy - e.p_x * e.p_y
    den_sq = e.p_x * e.p_y * (1 - e.p_x) * (1 - e.p_y)
    return float(num) / math.sqrt(float(den_sq))


_FUNCTIONS = {
    "confidence": confidence,
    "support": support,
    "lift": lift,
    "conviction": conviction,
    "cosine": cosine,
    "jaccard": jaccard,
    "phi": phi,
}


@dataclass(frozen=True)
class MeasureVector:
    """The seven scores of one interaction; None marks undefined."""

    confidence: float | None
    support: float
    lift: float | None
    conviction: float | None
    cosine: float | None
    jaccard: float | None
    phi: float | None

    def value(self, measure: str) -> float | None:
        if measure not in MEASURES:
            raise KeyError(measure)
        return getattr(self, measure)

    def as_dict(self) -> dict[str, float | None]:
        return {m: getattr(self, m) for m in MEASURES}


def compute_measures(estimates: ProbabilityEstimates) -> MeasureVector:
    return MeasureVector(**{m: fn(estimates) for m, fn in _FUNCTIONS.items()})


def sort_rank(value: float | None) -> tuple[int, float]:
    """Total order: undefined < every finite value < +infinity."""
    if value is None:
        return (0, 0.0)
    return (1, value)


def encode_value(value: float | None) -> float | str | None:
    """JSON form: finite numbers stay numbers, inf -> "inf", None -> null."""
    if value is None:
        return None
    if math.isinf(value):
        return "inf"
    return value


@dataclass(frozen=True)
class InteractionRecord:
    """One scored interaction, ready for ranking and display."""

    key: InteractionKey
    estimates: ProbabilityEstimates
    measures: MeasureVector
    interpretation: str
    baseline: Fraction | None = None  # forward kind only: unconditional share
