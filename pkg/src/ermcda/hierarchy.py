"""Attribute hierarchy: parent/bottom attributes, weights, validation.

Trees are immutable; weight edits produce a new tree. Within every sibling
group the weights are normalized shares that must sum to 1.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from ermcda.errors import TreeError

_WEIGHT_TOL = 1e-9

PARENT = "parent"
BOTTOM = "bottom"


@dataclass(frozen=True)
class DataBinding:
    """Names the record stream and key that feed a bottom attribute."""

    stream: str  # "questionnaires" | "interviews"
    item_code: str | None = None
    group: str | None = None
    concept: str | None = None


@dataclass(frozen=True)
class Attribute:
    id: str
    name: str
    kind: str  # PARENT or BOTTOM
    weight: float = 1.0
    children: tuple[str, ...] = ()
    scale: str | None = None  # bottom only
    transform: str | None = None  # bottom only: to the common scale
    source: DataBinding | None = None  # bottom only


@dataclass(frozen=True)
class AttributeTree:
    root: str
    attributes: Mapping[str, Attribute]
    common_scale: str

    def __getitem__(self, attr_id: str) -> Attribute:
        try:
            return self.attributes[attr_id]
        except KeyError:
            raise TreeError(f"unknown attribute {attr_id!r}") from None

    def children_of(self, attr_id: str) -> tuple[Attribute, ...]:
        return tuple(self[c] for c in self[attr_id].children)

    def bottoms(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.attributes.values() if a.kind == BOTTOM)

    def postorder(self) -> Iterator[Attribute]:
        """Yield every attribute reachable from the root, children first."""

        def walk(attr_id: str) -> Iterator[Attribute]:
            attr = self[attr_id]
            for child in attr.children:
                yield from walk(child)
            yield attr

        yield from walk(self.root)


@dataclass(frozen=True)
class TreeIssue:
    code: str
    attribute: str | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[TreeIssue, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.issues


def weights_from_frequencies(freqs: Sequence[float]) -> tuple[float, ...]:
    """Normalize nonnegative frequencies into sibling weights summing to 1."""
    if not freqs:
        raise TreeError("empty frequency list")
    if any(f < 0 for f in freqs):
        raise TreeError("frequencies must be nonnegative")
    total = sum(freqs)
    if total <= 0:
        raise TreeError("all frequencies are zero; weights undefined")
    return tuple(f / total for f in freqs)


def with_weights(tree: AttributeTree, weights: Mapping[str, float]) -> AttributeTree:
    """Return a copy of the tree with the given attribute weights replaced."""
    updated = dict(tree.attributes)
    for attr_id, weight in weights.items():
        if attr_id not in updated:
            raise TreeError(f"unknown attribute {attr_id!r}")
        updated[attr_id] = dataclasses.replace(updated[attr_id], weight=weight)
    return AttributeTree(tree.root, updated, tree.common_scale)


def set_top_level_split(
    tree: AttributeTree,
    interview_weight: float,
    interview_branch: str = "interviews",
) -> AttributeTree:
    """Set the root-level split between the interview branch and the other one."""
    if not 0.0 <= interview_weight <= 1.0:
        raise TreeError(f"interview weight {interview_weight} outside [0, 1]")
    top = tree[tree.root].children
    if len(top) != 2:
        raise TreeError(f"root has {len(top)} children, expected 2 branches")
    if interview_branch not in top:
        raise TreeError(f"no top-level branch named {interview_branch!r}")
    other = top[0] if top[1] == interview_branch else top[1]
    return with_weights(
        tree, {interview_branch: interview_weight, other: 1.0 - interview_weight}
    )


def validate(tree: AttributeTree) -> ValidationReport:
    """Structural diagnostics: cycles, orphans, weight sums, missing bindings.

    Side-effect free; problems are returned, not raised.
    """
    issues: list[TreeIssue] = []
    if tree.root not in tree.attributes:
        issues.append(TreeIssue("missing-root", tree.root, "root attribute not defined"))
        return ValidationReport(tuple(issues))

    parents_of: dict[str, list[str]] = {}
    for attr in tree.attributes.values():
        for child in attr.children:
            if child not in tree.attributes:
                issues.append(
                    TreeIssue("unknown-child", attr.id, f"child {child!r} not defined")
                )
            parents_of.setdefault(child, []).append(attr.id)

    for child, parent_ids in parents_of.items():
        if len(parent_ids) > 1:
            issues.append(
                TreeIssue(
                    "multiple-parents",
                    child,
                    f"attribute has parents {sorted(parent_ids)}",
                )
            )

    # cycle / reachability walk from the root
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def walk(attr_id: str) -> None:
        if attr_id not in tree.attributes:
            return
        mark = state.get(attr_id)
        if mark == 1:
            issues.append(TreeIssue("cycle", attr_id, "attribute is its own descendant"))
            return
        if mark == 2:
            return
        state[attr_id] = 1
        for child in tree.attributes[attr_id].children:
            walk(child)
        state[attr_id] = 2

    walk(tree.root)
    for attr_id in tree.attributes:
        if attr_id != tree.root and attr_id not in parents_of:
            issues.append(TreeIssue("orphan", attr_id, "not reachable from the root"))

    for attr in tree.attributes.values():
        if attr.kind == PARENT:
            if not attr.children:
                issues.append(TreeIssue("childless-parent", attr.id, "parent with no children"))
            if attr.scale or attr.transform:
                issues.append(
                    TreeIssue("parent-with-scale", attr.id, "parents carry no scale or transform")
                )
            kids = [tree.attributes[c] for c in attr.children if c in tree.attributes]
            if kids:
                total = sum(k.weight for k in kids)
                if abs(total - 1.0) > _WEIGHT_TOL:
                    issues.append(
                        TreeIssue(
                            "weight-sum",
                            attr.id,
                            f"child weights sum to {total:.12g}, expected 1",
                        )
                    )
                for kid in kids:
                    if not 0.0 <= kid.weight <= 1.0:
                        issues.append(
                            TreeIssue("weight-range", kid.id, f"weight {kid.weight} outside [0, 1]")
                        )
        elif attr.kind == BOTTOM:
            if attr.children:
                issues.append(TreeIssue("bottom-with-children", attr.id, "bottom listing children"))
            if not attr.scale:
                issues.append(TreeIssue("missing-scale", attr.id, "bottom attribute without a scale"))
            if not attr.transform:
                issues.append(
                    TreeIssue("missing-transform", attr.id, "bottom attribute without a transform")
                )
            if attr.source is None:
                issues.append(
                    TreeIssue("missing-binding", attr.id, "bottom attribute without a data binding")
                )
        else:
            issues.append(TreeIssue("bad-kind", attr.id, f"unknown kind {attr.kind!r}"))
    return ValidationReport(tuple(issues))
