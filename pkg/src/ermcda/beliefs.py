"""Belief distributions over grade scales.

A belief distribution assigns a degree of belief to each grade of a scale,
with the unassigned remainder carried explicitly as ignorance. Distributions
are built from response counts, from per-responder fractional assessments,
or from a scalar mean on the 1..N grade axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from ermcda.errors import DistributionError, ScaleError

if TYPE_CHECKING:
    from ermcda.scales import GradeScale

_TOL = 1e-9


@dataclass(frozen=True)
class BeliefDistribution:
    """Degrees of belief per grade plus an explicit ignorance mass."""

    scale: str
    beliefs: tuple[float, ...]
    ignorance: float

    def __post_init__(self) -> None:
        if not self.beliefs:
            raise DistributionError("a distribution needs at least one grade")
        for b in self.beliefs:
            if not (-_TOL <= b <= 1.0 + _TOL):
                raise DistributionError(f"belief {b} outside [0, 1]")
        total = sum(self.beliefs)
        if total > 1.0 + _TOL:
            raise DistributionError(f"beliefs sum to {total} > 1")
        if abs(self.ignorance - (1.0 - total)) > _TOL:
            raise DistributionError(
                f"ignorance {self.ignorance} inconsistent with beliefs summing to {total}"
            )

    @property
    def assigned(self) -> float:
        return sum(self.beliefs)

    def is_complete(self, tol: float = _TOL) -> bool:
        return self.ignorance <= tol


@dataclass(frozen=True)
class UtilityInterval:
    """Expected-utility bounds when part of the belief mass is unassigned."""

    min: float
    max: float
    mean_assigned: float


def distribution(scale: str, beliefs: Iterable[float]) -> BeliefDistribution:
    """Build a distribution from raw belief values, deriving the ignorance mass.

    Values within numerical noise of 0 are snapped to 0 so that engine output
    always satisfies the nonnegativity invariant exactly.
    """
    snapped = tuple(0.0 if -_TOL < b < 0.0 else b for b in beliefs)
    return BeliefDistribution(scale, snapped, max(0.0, 1.0 - sum(snapped)))


def from_counts(
    counts: Sequence[int], total_responders: int, scale: GradeScale
) -> BeliefDistribution:
    """Belief per grade as the share of responders who selected it.

    Responders who made no assessment contribute to ignorance.
    """
    if total_responders <= 0:
        raise DistributionError("total_responders must be positive")
    if len(counts) != scale.size:
        raise DistributionError(
            f"{len(counts)} counts for a {scale.size}-grade scale"
        )
    if any(c < 0 for c in counts):
        raise DistributionError("counts must be nonnegative")
    if sum(counts) > total_responders:
        raise DistributionError(
            f"counts sum to {sum(counts)} > {total_responders} responders"
        )
    return distribution(scale.id, (c / total_responders for c in counts))


def from_fractional_responses(
    responses: Sequence[Sequence[float]], scale: GradeScale
) -> BeliefDistribution:
    """Componentwise mean of per-responder belief vectors.

    A responder may spread belief over several grades; a vector summing to
    less than 1 contributes the shortfall to ignorance.
    """
    if not responses:
        raise DistributionError("no responses")
    for i, vector in enumerate(responses):
        if len(vector) != scale.size:
            raise DistributionError(f"response {i} has {len(vector)} entries")
        if any(v < 0 for v in vector):
            raise DistributionError(f"response {i} has negative belief")
        if sum(vector) > 1.0 + 1e-12:
            raise DistributionError(f"response {i} sums to {sum(vector)} > 1")
    k = len(responses)
    means = (sum(vector[n] for vector in responses) / k for n in range(scale.size))
    return distribution(scale.id, means)


def from_mean(mean: float, scale: GradeScale) -> BeliefDistribution:
    """Spread a scalar mean on the 1..N grade axis over its two adjacent grades.

    The floor grade receives ceil(m) - m and the ceiling grade m - floor(m),
    so the grade-index expectation of the result reproduces the mean. Means
    outside [1, N] are clamped to the boundary grade. The result is always
    complete (zero ignorance).
    """
    if math.isnan(mean) or math.isinf(mean):
        raise DistributionError(f"mean must be finite, got {mean}")
    n = scale.size
    m = min(max(mean, 1.0), float(n))
    floor, ceil = math.floor(m), math.ceil(m)
    beliefs = [0.0] * n
    if floor == ceil:
        beliefs[floor - 1] = 1.0
    else:
        beliefs[floor - 1] = ceil - m
        beliefs[ceil - 1] = m - floor
    return BeliefDistribution(scale.id, tuple(beliefs), 0.0)


def expected_utility(
    d: BeliefDistribution,
    scale: GradeScale,
    utilities: Sequence[float] | None = None,
) -> UtilityInterval:
    """Expected utility of the assigned mass, with bounds for the ignorance.

    The unassigned mass could fall anywhere between the worst and the best
    grade; min/max bound that. For a complete distribution the interval
    collapses to the plain expected utility.

    `utilities` overrides the scale's utilities (same length, any monotone
    values); ranking order is invariant under positive affine rescaling.
    """
    if d.scale != scale.id:
        raise ScaleError(f"distribution on {d.scale!r}, scale is {scale.id!r}")
    u = tuple(utilities) if utilities is not None else scale.utilities
    if len(u) != scale.size:
        raise ScaleError(f"{len(u)} utilities for a {scale.size}-grade scale")
    mean_assigned = sum(b * ui for b, ui in zip(d.beliefs, u))
    return UtilityInterval(
        min=mean_assigned + d.ignorance * u[0],
        max=mean_assigned + d.ignorance * u[-1],
        mean_assigned=mean_assigned,
    )
