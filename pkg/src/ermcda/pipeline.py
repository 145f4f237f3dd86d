"""End-to-end evaluation: weight derivation, aggregation, ranking.

Weights follow the frequency principle. Bottom attributes weigh in proportion
to how often they were answered or named: questionnaire items by their
per-alternative respondent counts, interview concepts by their pooled tally
frequencies. Parent groups weigh in proportion to how many bottom attributes
they contain, and the two top branches split per the configured
interview/questionnaire ratio. Explicit model weights always win over
derivation; what-if overrides win over both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ermcda import engine
from ermcda.beliefs import BeliefDistribution
from ermcda.errors import ModelError, TreeError
from ermcda.hierarchy import BOTTOM, PARENT, Attribute, set_top_level_split
from ermcda.ingest import (
    InterviewRecord,
    Model,
    QuestionnaireRecord,
    leaves_from_records,
)

_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class RunResult:
    root_id: str
    alternatives: tuple[str, ...]
    interview_weight: float
    weights: dict[str, dict[str, float]]  # alternative -> attribute -> weight
    leaves: dict[str, dict[str, BeliefDistribution]]  # on their own scales
    nodes: dict[str, dict[str, BeliefDistribution]]  # on the common scale
    ranking: list[engine.RankedAlternative]
    deviations: dict[str, tuple[float, ...]] = field(default_factory=dict)

    def root_distribution(self, alternative: str) -> BeliefDistribution:
        return self.nodes[alternative][self.root_id]


def _bottom_descendants(model: Model, attr: Attribute) -> int:
    if attr.kind == BOTTOM:
        return 1
    return sum(_bottom_descendants(model, child) for child in model.tree.children_of(attr.id))


def _validate_group_override(
    parent_id: str, children: Sequence[Attribute], override: Mapping[str, float]
) -> dict[str, float]:
    child_ids = {c.id for c in children}
    unknown = set(override) - child_ids
    if unknown:
        raise TreeError(f"group {parent_id!r}: unknown children {sorted(unknown)}")
    missing = child_ids - set(override)
    if missing:
        raise TreeError(f"group {parent_id!r}: override misses children {sorted(missing)}")
    for child_id, weight in override.items():
        if not 0.0 <= weight <= 1.0:
            raise TreeError(f"group {parent_id!r}: weight {weight} for {child_id!r} outside [0, 1]")
    total = sum(override.values())
    if abs(total - 1.0) > _WEIGHT_TOL:
        raise TreeError(f"group {parent_id!r}: override weights sum to {total:.12g}, expected 1")
    return dict(override)


def derive_weights(
    model: Model,
    questionnaire_records: Sequence[QuestionnaireRecord],
    interview_records: Sequence[InterviewRecord],
    interview_weight: float | None = None,
    sibling_overrides: Mapping[str, Mapping[str, float]] | None = None,
) -> tuple[float, dict[str, dict[str, float]]]:
    """Build the full per-alternative weight table.

    Returns (effective interview weight, {alternative: {attribute: weight}}).
    Only questionnaire leaf weights differ between alternatives; every other
    weight is shared.
    """
    sibling_overrides = dict(sibling_overrides or {})
    effective_iw = model.interview_weight if interview_weight is None else interview_weight
    if not 0.0 <= effective_iw <= 1.0:
        raise TreeError(f"interview weight {effective_iw} outside [0, 1]")
    tree = set_top_level_split(model.tree, effective_iw, model.interview_branch)

    alternatives = list(dict.fromkeys(r.alternative for r in questionnaire_records))
    counts: dict[tuple[str, str], int] = {
        (r.alternative, r.item_code): r.respondent_count for r in questionnaire_records
    }
    frequencies: dict[tuple[str, str], int] = {
        (r.group, r.concept): r.frequency for r in interview_records
    }

    base: dict[str, float] = {tree.root: 1.0}
    per_alt_extra: dict[str, dict[str, float]] = {alt: {} for alt in alternatives}

    for parent in tree.attributes.values():
        if parent.kind != PARENT or not parent.children:
            continue
        children = tree.children_of(parent.id)
        if parent.id in sibling_overrides:
            base.update(_validate_group_override(parent.id, children, sibling_overrides[parent.id]))
            continue
        explicit = [c.id for c in children if c.id in model.explicit_weights]
        if parent.id == tree.root:
            # the top split was already applied onto the tree weights
            for child in children:
                base[child.id] = child.weight
            continue
        if explicit:
            if len(explicit) != len(children):
                raise ModelError(
                    f"group {parent.id!r}: mixed explicit and derived weights "
                    f"(explicit: {explicit})"
                )
            total = sum(c.weight for c in children)
            if abs(total - 1.0) > _WEIGHT_TOL:
                raise ModelError(
                    f"group {parent.id!r}: explicit weights sum to {total:.12g}"
                )
            for child in children:
                base[child.id] = child.weight
            continue
        kinds = {c.kind for c in children}
        if kinds == {PARENT}:
            sizes = [_bottom_descendants(model, c) for c in children]
            total_size = sum(sizes)
            for child, size in zip(children, sizes):
                base[child.id] = size / total_size
        elif kinds == {BOTTOM}:
            streams = {c.source.stream for c in children if c.source}
            if streams == {"questionnaires"}:
                for alt in alternatives:
                    shares = _frequency_shares(
                        parent.id,
                        [(c.id, counts.get((alt, c.source.item_code or ""))) for c in children],
                        f"respondent counts for alternative {alt!r}",
                    )
                    per_alt_extra[alt].update(shares)
            elif streams == {"interviews"}:
                shares = _frequency_shares(
                    parent.id,
                    [(c.id, frequencies.get((c.source.group or "", c.source.concept or ""))) for c in children],
                    "interview tally frequencies",
                )
                base.update(shares)
            else:
                raise ModelError(
                    f"group {parent.id!r} mixes record streams {sorted(streams)}; "
                    "derived weights need one stream per group"
                )
        else:
            raise ModelError(
                f"group {parent.id!r} mixes parent and bottom children"
            )

    table = {alt: {**base, **per_alt_extra[alt]} for alt in alternatives}
    return effective_iw, table


def _frequency_shares(
    parent_id: str,
    pairs: Sequence[tuple[str, int | None]],
    what: str,
) -> dict[str, float]:
    missing = [attr_id for attr_id, value in pairs if value is None]
    if missing:
        raise ModelError(f"group {parent_id!r}: no {what} for {missing}")
    total = sum(value for _, value in pairs)  # type: ignore[misc]
    if total <= 0:
        raise ModelError(f"group {parent_id!r}: {what} are all zero")
    return {attr_id: value / total for attr_id, value in pairs}  # type: ignore[operator]


def run(
    model: Model,
    questionnaire_records: Sequence[QuestionnaireRecord],
    interview_records: Sequence[InterviewRecord],
    interview_weight: float | None = None,
    sibling_overrides: Mapping[str, Mapping[str, float]] | None = None,
    utility_overrides: Mapping[str, Sequence[float]] | None = None,
) -> RunResult:
    """Evaluate the model on the given records and rank the alternatives."""
    utility_overrides = dict(utility_overrides or {})
    for scale_id, utilities in utility_overrides.items():
        _validate_utilities(model, scale_id, utilities)

    leaves = leaves_from_records(model, questionnaire_records, interview_records)
    effective_iw, weights = derive_weights(
        model,
        questionnaire_records,
        interview_records,
        interview_weight,
        sibling_overrides,
    )
    nodes = engine.evaluate(model.tree, model.transforms, leaves, weights)

    alternatives = tuple(leaves.keys())
    common = model.common_scale
    roots = [(alt, nodes[alt][model.tree.root]) for alt in alternatives]
    ranking = engine.rank(
        roots, common, utilities=utility_overrides.get(common.id)
    )

    deviations: dict[str, tuple[float, ...]] = {}
    for alt in alternatives:
        reference = model.references.get(alt)
        if reference is not None:
            root = nodes[alt][model.tree.root]
            deviations[alt] = tuple(
                b - r for b, r in zip(root.beliefs, reference)
            )

    return RunResult(
        root_id=model.tree.root,
        alternatives=alternatives,
        interview_weight=effective_iw,
        weights=weights,
        leaves=leaves,
        nodes=nodes,
        ranking=ranking,
        deviations=deviations,
    )


def _validate_utilities(model: Model, scale_id: str, utilities: Sequence[float]) -> None:
    if scale_id not in model.scales:
        raise ModelError(f"utility override for unknown scale {scale_id!r}")
    scale = model.scales[scale_id]
    if len(utilities) != scale.size:
        raise ModelError(
            f"utility override for {scale_id!r} has {len(utilities)} values, "
            f"scale has {scale.size} grades"
        )
    for a, b in zip(utilities, list(utilities)[1:]):
        if not b > a:
            raise ModelError(
                f"utility override for {scale_id!r} must be strictly increasing"
            )
