"""Evidential-reasoning core: weighted evidence combination over a hierarchy.

Each child assessment is discounted by its weight into basic probability
masses, the masses are folded pairwise with the conflict-renormalizing rule,
and the parent's belief distribution is read back out. The residual mass is
tracked in two parts: weight-induced (how much say the other attributes keep)
and ignorance-induced (genuinely missing information); only the second
survives into the parent's ignorance. The fold is commutative and
associative, so child order never changes the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ermcda.beliefs import BeliefDistribution, UtilityInterval, distribution, expected_utility
from ermcda.errors import ConflictError, DistributionError, ScaleError, TreeError
from ermcda.hierarchy import BOTTOM, AttributeTree
from ermcda.scales import GradeScale, ScaleTransform, apply_transform

_MASS_TOL = 1e-9
_CONFLICT_FLOOR = 1e-12


@dataclass(frozen=True)
class MassAssignment:
    """Per-grade basic probability masses plus the two residual masses."""

    masses: tuple[float, ...]
    residual_weight_mass: float  # left unassigned because the child lacks full weight
    ignorance_mass: float  # unassigned because the child itself is ignorant

    def __post_init__(self) -> None:
        total = sum(self.masses) + self.residual_weight_mass + self.ignorance_mass
        if abs(total - 1.0) > _MASS_TOL:
            raise DistributionError(f"masses sum to {total}, expected 1")
        if any(m < -_MASS_TOL for m in self.masses) or min(
            self.residual_weight_mass, self.ignorance_mass
        ) < -_MASS_TOL:
            raise DistributionError("negative mass")

    @property
    def unassigned(self) -> float:
        return self.residual_weight_mass + self.ignorance_mass


@dataclass(frozen=True)
class FoldStep:
    """One pairwise combination during a fold, kept for explanation traces."""

    child_index: int
    conflict: float
    scaling: float  # the K factor 1 / (1 - conflict)
    result: MassAssignment


@dataclass(frozen=True)
class RankedAlternative:
    name: str
    distribution: BeliefDistribution
    utility: UtilityInterval


def to_masses(d: BeliefDistribution, weight: float) -> MassAssignment:
    """Discount a child's beliefs by its relative weight."""
    if not 0.0 <= weight <= 1.0:
        raise DistributionError(f"weight {weight} outside [0, 1]")
    return MassAssignment(
        masses=tuple(weight * b for b in d.beliefs),
        residual_weight_mass=1.0 - weight,
        ignorance_mass=weight * d.ignorance,
    )


def _combine_pair(acc: MassAssignment, nxt: MassAssignment) -> tuple[MassAssignment, float, float]:
    """Dempster-style combination of two mass assignments.

    Returns (combined, conflict, K). Conflict is the total mass on pairs of
    distinct grades; K renormalizes the rest.
    """
    a, b = acc.masses, nxt.masses
    a_h = acc.unassigned
    b_h = nxt.unassigned
    total_a = sum(a)
    total_b = sum(b)
    # sum over t != j of a_t * b_j, without the quadratic double loop
    conflict = total_a * total_b - sum(x * y for x, y in zip(a, b))
    denominator = 1.0 - conflict
    if denominator <= _CONFLICT_FLOOR:
        raise ConflictError(
            f"total conflict between evidence sources (residual {denominator:.3g})"
        )
    k = 1.0 / denominator
    masses = tuple(k * (x * y + x * b_h + a_h * y) for x, y in zip(a, b))
    ignorance_mass = k * (
        acc.ignorance_mass * nxt.ignorance_mass
        + acc.ignorance_mass * nxt.residual_weight_mass
        + acc.residual_weight_mass * nxt.ignorance_mass
    )
    residual_weight_mass = k * acc.residual_weight_mass * nxt.residual_weight_mass
    return (
        MassAssignment(masses, residual_weight_mass, ignorance_mass),
        conflict,
        k,
    )


def _check_children(
    children: Sequence[tuple[BeliefDistribution, float]]
) -> None:
    if not children:
        raise DistributionError("combine needs at least one child")
    scale = children[0][0].scale
    size = len(children[0][0].beliefs)
    for d, _ in children[1:]:
        if d.scale != scale or len(d.beliefs) != size:
            raise ScaleError(
                f"children on different scales: {d.scale!r} vs {scale!r}"
            )
    total_weight = sum(w for _, w in children)
    if abs(total_weight - 1.0) > _MASS_TOL:
        raise TreeError(f"child weights sum to {total_weight:.12g}, expected 1")


def _extract(acc: MassAssignment, scale: str) -> BeliefDistribution:
    denominator = 1.0 - acc.residual_weight_mass
    beliefs = tuple(m / denominator for m in acc.masses)
    return distribution(scale, beliefs)


def combine_detailed(
    children: Sequence[tuple[BeliefDistribution, float]]
) -> tuple[BeliefDistribution, tuple[MassAssignment, ...], tuple[FoldStep, ...]]:
    """Combine weighted children, returning the per-child masses and fold trace."""
    _check_children(children)
    child_masses = tuple(to_masses(d, w) for d, w in children)
    acc = child_masses[0]
    steps: list[FoldStep] = []
    for index, nxt in enumerate(child_masses[1:], start=1):
        acc, conflict, k = _combine_pair(acc, nxt)
        steps.append(FoldStep(child_index=index, conflict=conflict, scaling=k, result=acc))
    return _extract(acc, children[0][0].scale), child_masses, tuple(steps)


def combine(
    children: Sequence[tuple[BeliefDistribution, float]]
) -> BeliefDistribution:
    """Combine weighted child assessments into the parent's assessment.

    Children must share one scale and their weights must sum to 1. Folding
    happens in declaration order; any other order gives the same output.
    """
    result, _, _ = combine_detailed(children)
    return result


def evaluate(
    tree: AttributeTree,
    transforms: Mapping[str, ScaleTransform],
    leaf_data: Mapping[str, Mapping[str, BeliefDistribution]],
    weights: Mapping[str, Mapping[str, float]] | None = None,
) -> dict[str, dict[str, BeliefDistribution]]:
    """Aggregate leaf assessments bottom-up for every alternative.

    `leaf_data` maps alternative -> bottom attribute id -> distribution on the
    bottom's own scale. `weights` optionally overrides attribute weights per
    alternative (tree weights are used where absent). Returns, per
    alternative, the common-scale distribution of every node: transformed
    leaves, every intermediate parent, and the root.
    """
    results: dict[str, dict[str, BeliefDistribution]] = {}
    for alternative, leaves in leaf_data.items():
        overrides = (weights or {}).get(alternative, {})
        results[alternative] = _evaluate_one(tree, transforms, leaves, overrides)
    return results


def _evaluate_one(
    tree: AttributeTree,
    transforms: Mapping[str, ScaleTransform],
    leaves: Mapping[str, BeliefDistribution],
    overrides: Mapping[str, float],
) -> dict[str, BeliefDistribution]:
    nodes: dict[str, BeliefDistribution] = {}
    for attr in tree.postorder():
        if attr.kind == BOTTOM:
            if attr.id not in leaves:
                raise TreeError(f"no leaf data for bottom attribute {attr.id!r}")
            raw = leaves[attr.id]
            if attr.transform is None or attr.transform not in transforms:
                raise TreeError(f"bottom attribute {attr.id!r} has no usable transform")
            nodes[attr.id] = apply_transform(transforms[attr.transform], raw)
        else:
            pairs = [
                (nodes[child.id], overrides.get(child.id, child.weight))
                for child in tree.children_of(attr.id)
            ]
            nodes[attr.id] = combine(pairs)
    return nodes


def child_weights(
    tree: AttributeTree,
    parent_id: str,
    overrides: Mapping[str, float] | None = None,
) -> list[tuple[str, float]]:
    """Effective (child id, weight) pairs for a parent, with overrides applied."""
    overrides = overrides or {}
    return [
        (child.id, overrides.get(child.id, child.weight))
        for child in tree.children_of(parent_id)
    ]


def rank(
    alternatives: Sequence[tuple[str, BeliefDistribution]],
    scale: GradeScale,
    utilities: Sequence[float] | None = None,
) -> list[RankedAlternative]:
    """Order alternatives by expected utility, best first.

    Ties break on the max-utility bound, then on the name, so the order is
    total and reproducible.
    """
    if not alternatives:
        raise DistributionError("nothing to rank")
    ranked = [
        RankedAlternative(name, d, expected_utility(d, scale, utilities))
        for name, d in alternatives
    ]
    ranked.sort(key=lambda r: (-r.utility.mean_assigned, -r.utility.max, r.name))
    return ranked
