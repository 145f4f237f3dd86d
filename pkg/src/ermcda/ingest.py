"""Model and data loading: CSV cleaning, record validation, leaf derivation.

The model file is a JSON document (schema "er-mcda/1") declaring scales,
transforms, the attribute tree with data bindings, and optional explicit
weights. Data files are UTF-8 CSV with a header row: questionnaires carry
`alternative,item_code,n,mean`, interviews carry `group,concept,frequency`.
Cleaning never drops a row silently; every rejection is reported with its
line number and reason.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ermcda import hierarchy
from ermcda.beliefs import BeliefDistribution, from_mean
from ermcda.errors import DataError, ModelError
from ermcda.hierarchy import Attribute, AttributeTree, DataBinding
from ermcda.scales import (
    GradeScale,
    ScaleTransform,
    identity_transform,
    interview_to_common,
    make_scale,
    transform_from_anchor_rules,
)

MODEL_SCHEMA = "er-mcda/1"

DEFAULT_INTERVIEW_GROUPS = ("O-A", "T-A", "O-V")


@dataclass(frozen=True)
class QuestionnaireRecord:
    alternative: str
    item_code: str
    respondent_count: int
    mean: float


@dataclass(frozen=True)
class InterviewRecord:
    group: str
    concept: str
    frequency: int


@dataclass(frozen=True)
class Rejection:
    line: int
    reason: str


@dataclass(frozen=True)
class Model:
    """A loaded, validated model file."""

    scales: dict[str, GradeScale]
    transforms: dict[str, ScaleTransform]
    tree: AttributeTree
    interview_branch: str
    interview_weight: float
    explicit_weights: frozenset[str]
    references: dict[str, tuple[float, ...]] = field(default_factory=dict)

    @property
    def common_scale(self) -> GradeScale:
        return self.scales[self.tree.common_scale]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ModelError(message)


def load_model(path: str | Path) -> Model:
    """Load and validate a model file; raises ModelError on any defect."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ModelError(f"model file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file is not valid JSON: {exc}") from None

    _require(isinstance(raw, dict), "model file must hold a JSON object")
    _require(
        raw.get("schema") == MODEL_SCHEMA,
        f"unsupported model schema {raw.get('schema')!r}, expected {MODEL_SCHEMA!r}",
    )

    scales: dict[str, GradeScale] = {}
    for scale_id, spec in raw.get("scales", {}).items():
        try:
            scales[scale_id] = make_scale(scale_id, spec["labels"], spec["utilities"])
        except KeyError as exc:
            raise ModelError(f"scale {scale_id!r} missing field {exc}") from None

    common_id = raw.get("common_scale")
    _require(common_id in scales, f"common_scale {common_id!r} is not a declared scale")

    transforms: dict[str, ScaleTransform] = {}
    for t_id, spec in raw.get("transforms", {}).items():
        transforms[t_id] = _build_transform(t_id, spec, scales)

    tree, explicit = _build_tree(raw.get("tree", {}), common_id, scales, transforms)

    split = raw.get("top_split", {})
    interview_branch = split.get("interview_branch", "interviews")
    interview_weight = float(split.get("interview_weight", 0.6))
    _require(
        0.0 <= interview_weight <= 1.0,
        f"top_split interview_weight {interview_weight} outside [0, 1]",
    )
    _require(
        interview_branch in tree[tree.root].children,
        f"interview_branch {interview_branch!r} is not a child of the root",
    )

    references: dict[str, tuple[float, ...]] = {}
    for name, vector in raw.get("references", {}).items():
        _require(
            isinstance(vector, list) and len(vector) == scales[common_id].size,
            f"reference for {name!r} must list one belief per common grade",
        )
        references[name] = tuple(float(v) for v in vector)

    report = hierarchy.validate(tree)
    if not report.ok:
        details = "; ".join(f"{i.code}({i.attribute}): {i.message}" for i in report.issues)
        raise ModelError(f"model tree is invalid: {details}")

    return Model(
        scales=scales,
        transforms=transforms,
        tree=tree,
        interview_branch=interview_branch,
        interview_weight=interview_weight,
        explicit_weights=frozenset(explicit),
        references=references,
    )


def _build_transform(
    t_id: str, spec: Mapping, scales: Mapping[str, GradeScale]
) -> ScaleTransform:
    kind = spec.get("kind")
    source_id, target_id = spec.get("source"), spec.get("target")
    _require(source_id in scales, f"transform {t_id!r}: unknown source scale {source_id!r}")
    _require(target_id in scales, f"transform {t_id!r}: unknown target scale {target_id!r}")
    source, target = scales[source_id], scales[target_id]
    if kind == "identity":
        _require(
            source.size == target.size,
            f"transform {t_id!r}: identity needs equal-sized scales",
        )
        return identity_transform(source_id, target_id, source.size)
    if kind == "interview-3to5":
        _require(
            source.size == 3 and target.size == 5,
            f"transform {t_id!r}: interview-3to5 needs a 3-grade source and 5-grade target",
        )
        return interview_to_common(source_id, target_id)
    if kind == "anchor-rules":
        rules = []
        for rule in spec.get("rules", ()):
            anchor = [float(rule.get("anchor", {}).get(label, 0.0)) for label in source.labels]
            rules.append((anchor, target.index_of(rule["target"])))
        return transform_from_anchor_rules(
            source_id, target_id, source.size, target.size, rules
        )
    raise ModelError(f"transform {t_id!r}: unknown kind {kind!r}")


def _build_tree(
    spec: Mapping,
    common_id: str,
    scales: Mapping[str, GradeScale],
    transforms: Mapping[str, ScaleTransform],
) -> tuple[AttributeTree, set[str]]:
    root = spec.get("root")
    entries = spec.get("attributes")
    _require(bool(root) and isinstance(entries, list), "tree needs a root and an attribute list")

    attributes: dict[str, Attribute] = {}
    explicit: set[str] = set()
    for entry in entries:
        attr_id = entry.get("id")
        _require(bool(attr_id), "attribute without an id")
        _require(attr_id not in attributes, f"duplicate attribute id {attr_id!r}")
        if "children" in entry:
            attr = Attribute(
                id=attr_id,
                name=entry.get("name", attr_id),
                kind=hierarchy.PARENT,
                children=tuple(entry["children"]),
            )
        else:
            scale_id = entry.get("scale")
            transform_id = entry.get("transform")
            _require(
                scale_id in scales,
                f"bottom attribute {attr_id!r}: unknown scale {scale_id!r}",
            )
            _require(
                transform_id in transforms,
                f"bottom attribute {attr_id!r}: unknown transform {transform_id!r}",
            )
            transform = transforms[transform_id]
            _require(
                transform.source == scale_id and transform.target == common_id,
                f"bottom attribute {attr_id!r}: transform {transform_id!r} does not map "
                f"{scale_id!r} to the common scale",
            )
            binding = entry.get("source")
            _require(
                isinstance(binding, dict) and "stream" in binding,
                f"bottom attribute {attr_id!r}: missing data binding",
            )
            attr = Attribute(
                id=attr_id,
                name=entry.get("name", attr_id),
                kind=hierarchy.BOTTOM,
                scale=scale_id,
                transform=transform_id,
                source=DataBinding(
                    stream=binding["stream"],
                    item_code=binding.get("item_code"),
                    group=binding.get("group"),
                    concept=binding.get("concept"),
                ),
            )
        if "weight" in entry:
            attr = dataclasses.replace(attr, weight=float(entry["weight"]))
            explicit.add(attr_id)
        attributes[attr_id] = attr

    tree = AttributeTree(root=root, attributes=attributes, common_scale=common_id)
    # default weights: uniform within each sibling group where not explicit
    defaults: dict[str, float] = {}
    for attr in attributes.values():
        if attr.kind != hierarchy.PARENT or not attr.children:
            continue
        implied = [c for c in attr.children if c not in explicit]
        if not implied:
            continue
        remaining = 1.0 - sum(
            attributes[c].weight for c in attr.children if c in explicit
        )
        for child in implied:
            defaults[child] = remaining / len(implied)
    if defaults:
        tree = hierarchy.with_weights(tree, defaults)
    return tree, explicit


def clean_questionnaire_rows(
    rows: Iterable[Mapping[str, str]],
    scale_size: int = 5,
    first_line: int = 2,
) -> tuple[list[QuestionnaireRecord], list[Rejection]]:
    """Validate raw questionnaire rows into records plus a rejection report."""
    records: list[QuestionnaireRecord] = []
    rejections: list[Rejection] = []
    seen: set[tuple[str, str]] = set()
    for line, row in enumerate(rows, start=first_line):
        alternative = (row.get("alternative") or "").strip()
        item_code = (row.get("item_code") or "").strip()
        if not alternative:
            rejections.append(Rejection(line, "missing alternative"))
            continue
        if not item_code:
            rejections.append(Rejection(line, "missing item_code"))
            continue
        try:
            count = int((row.get("n") or "").strip())
        except ValueError:
            rejections.append(Rejection(line, f"non-numeric n {row.get('n')!r}"))
            continue
        if count <= 0:
            rejections.append(Rejection(line, f"respondent count {count} not positive"))
            continue
        mean_text = (row.get("mean") or "").strip()
        if not mean_text:
            rejections.append(Rejection(line, "missing mean"))
            continue
        try:
            mean = float(mean_text)
        except ValueError:
            rejections.append(Rejection(line, f"non-numeric mean {mean_text!r}"))
            continue
        if not 0.0 <= mean <= scale_size:
            rejections.append(Rejection(line, f"mean {mean} outside [0, {scale_size}]"))
            continue
        key = (alternative, item_code)
        if key in seen:
            rejections.append(Rejection(line, f"duplicate record for {alternative}/{item_code}"))
            continue
        seen.add(key)
        records.append(QuestionnaireRecord(alternative, item_code, count, mean))
    return records, rejections


def clean_interview_rows(
    rows: Iterable[Mapping[str, str]],
    valid_groups: Sequence[str] = DEFAULT_INTERVIEW_GROUPS,
    first_line: int = 2,
) -> tuple[list[InterviewRecord], list[Rejection]]:
    """Validate raw interview tally rows into records plus a rejection report."""
    records: list[InterviewRecord] = []
    rejections: list[Rejection] = []
    seen: set[tuple[str, str]] = set()
    for line, row in enumerate(rows, start=first_line):
        group = (row.get("group") or "").strip()
        concept = (row.get("concept") or "").strip()
        if not group or (valid_groups and group not in valid_groups):
            rejections.append(Rejection(line, f"invalid group {group!r}"))
            continue
        if not concept:
            rejections.append(Rejection(line, "missing concept"))
            continue
        try:
            frequency = int((row.get("frequency") or "").strip())
        except ValueError:
            rejections.append(
                Rejection(line, f"non-numeric frequency {row.get('frequency')!r}")
            )
            continue
        if frequency < 0:
            rejections.append(Rejection(line, f"negative frequency {frequency}"))
            continue
        key = (group, concept)
        if key in seen:
            rejections.append(Rejection(line, f"duplicate record for {group}/{concept}"))
            continue
        seen.add(key)
        records.append(InterviewRecord(group, concept, frequency))
    return records, rejections


def _read_csv(path: str | Path, required: Sequence[str]) -> list[dict[str, str]]:
    path = Path(path)
    try:
        with path.open(encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames or []
            missing = [col for col in required if col not in header]
            if missing:
                raise DataError(f"{path}: missing required columns {missing}")
            return list(reader)
    except FileNotFoundError:
        raise DataError(f"data file not found: {path}") from None


def load_questionnaire_csv(
    path: str | Path, scale_size: int = 5
) -> tuple[list[QuestionnaireRecord], list[Rejection]]:
    rows = _read_csv(path, ("alternative", "item_code", "n", "mean"))
    return clean_questionnaire_rows(rows, scale_size=scale_size)


def load_interview_csv(
    path: str | Path, valid_groups: Sequence[str] = DEFAULT_INTERVIEW_GROUPS
) -> tuple[list[InterviewRecord], list[Rejection]]:
    rows = _read_csv(path, ("group", "concept", "frequency"))
    return clean_interview_rows(rows, valid_groups=valid_groups)


def interview_frequency_to_mean(
    records: Sequence[InterviewRecord], scale_size: int = 3
) -> list[float]:
    """Map one group's tally frequencies onto the grade axis.

    The most frequent concept lands exactly on the top grade; the rest scale
    proportionally, so multiplying every frequency by a constant changes
    nothing.
    """
    if not records:
        raise DataError("empty interview group")
    groups = {r.group for r in records}
    if len(groups) > 1:
        raise DataError(f"records span several groups: {sorted(groups)}")
    peak = max(r.frequency for r in records)
    if peak <= 0:
        raise DataError(f"group {records[0].group!r} has no positive frequency")
    return [r.frequency * scale_size / peak for r in records]


def leaves_from_records(
    model: Model,
    questionnaire_records: Sequence[QuestionnaireRecord],
    interview_records: Sequence[InterviewRecord],
) -> dict[str, dict[str, BeliefDistribution]]:
    """Derive the per-alternative leaf distributions the model's bottoms need.

    Questionnaire leaves come from the per-alternative item means; interview
    leaves come from the pooled tally means and are therefore shared by every
    alternative. Records that no bottom attribute binds are tolerated.
    """
    by_item: dict[tuple[str, str], QuestionnaireRecord] = {}
    for record in questionnaire_records:
        key = (record.alternative, record.item_code)
        if key in by_item:
            raise DataError(f"duplicate questionnaire record for {key}")
        by_item[key] = record
    alternatives = list(dict.fromkeys(r.alternative for r in questionnaire_records))
    if not alternatives:
        raise DataError("no questionnaire records: no alternatives to assess")

    by_group: dict[str, list[InterviewRecord]] = {}
    seen_concepts: set[tuple[str, str]] = set()
    for record in interview_records:
        key = (record.group, record.concept)
        if key in seen_concepts:
            raise DataError(f"duplicate interview record for {key}")
        seen_concepts.add(key)
        by_group.setdefault(record.group, []).append(record)

    interview_means: dict[tuple[str, str], float] = {}
    for group, group_records in by_group.items():
        means = interview_frequency_to_mean(group_records)
        for record, mean in zip(group_records, means):
            interview_means[(group, record.concept)] = mean

    shared_interview: dict[str, BeliefDistribution] = {}
    per_alternative: dict[str, dict[str, BeliefDistribution]] = {
        alt: {} for alt in alternatives
    }
    for bottom in model.tree.bottoms():
        binding = bottom.source
        if binding is None:
            raise DataError(f"bottom attribute {bottom.id!r} has no data binding")
        scale = model.scales[bottom.scale]
        if binding.stream == "questionnaires":
            for alt in alternatives:
                record = by_item.get((alt, binding.item_code or ""))
                if record is None:
                    raise DataError(
                        f"no questionnaire record for attribute {bottom.id!r} "
                        f"(item {binding.item_code!r}, alternative {alt!r})"
                    )
                per_alternative[alt][bottom.id] = from_mean(record.mean, scale)
        elif binding.stream == "interviews":
            key = (binding.group or "", binding.concept or "")
            if key not in interview_means:
                raise DataError(
                    f"no interview record for attribute {bottom.id!r} "
                    f"(group {key[0]!r}, concept {key[1]!r})"
                )
            shared_interview[bottom.id] = from_mean(interview_means[key], scale)
        else:
            raise DataError(
                f"bottom attribute {bottom.id!r}: unknown stream {binding.stream!r}"
            )
    for alt in alternatives:
        per_alternative[alt].update(shared_interview)
    return per_alternative
