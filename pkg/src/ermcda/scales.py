"""Grade scales and rule-based transformations between them.

Every transform is held as a dense row-stochastic matrix: row i is the belief
vector on the target scale that one unit of belief on source grade i becomes.
Three authoring paths produce that one representation: the identity mapping
for same-shaped scales, the fixed 3-to-5 interview expansion, and solving a
set of anchor rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import nnls

from ermcda.beliefs import BeliefDistribution, distribution
from ermcda.errors import ScaleError, TransformError

_ROW_TOL = 1e-12
_RANK_TOL = 1e-9


@dataclass(frozen=True)
class GradeScale:
    """An ordered set of assessment grades with monotone utilities in [0, 1]."""

    id: str
    labels: tuple[str, ...]
    utilities: tuple[float, ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ScaleError(f"scale {self.id!r} has no grade {label!r}") from None


@dataclass(frozen=True)
class ScaleTransform:
    """Linear map from a source scale's grades to target-scale belief vectors."""

    source: str
    target: str
    matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        width = len(self.matrix[0]) if self.matrix else 0
        for i, row in enumerate(self.matrix):
            if len(row) != width:
                raise TransformError("ragged transform matrix")
            if any(v < 0.0 for v in row):
                raise TransformError(f"negative entry in transform row {i}")
            if abs(sum(row) - 1.0) > _ROW_TOL:
                raise TransformError(
                    f"transform row {i} sums to {sum(row)}, expected 1"
                )


def make_scale(id: str, labels: Sequence[str], utilities: Sequence[float]) -> GradeScale:
    """Validate and build a grade scale (worst grade first, best last)."""
    if len(labels) != len(utilities):
        raise ScaleError(
            f"{len(labels)} labels but {len(utilities)} utilities for scale {id!r}"
        )
    if len(labels) < 2:
        raise ScaleError(f"scale {id!r} needs at least 2 grades")
    if len(set(labels)) != len(labels):
        raise ScaleError(f"duplicate grade labels in scale {id!r}")
    if utilities[0] != 0.0 or utilities[-1] != 1.0:
        raise ScaleError(f"scale {id!r} utilities must run from 0.0 to 1.0")
    for a, b in zip(utilities, utilities[1:]):
        if not b > a:
            raise ScaleError(f"scale {id!r} utilities must be strictly increasing")
    return GradeScale(id, tuple(labels), tuple(float(u) for u in utilities))


def identity_transform(source: str, target: str, size: int) -> ScaleTransform:
    """Map each source grade to the same-ranked target grade with belief 1."""
    rows = tuple(
        tuple(1.0 if j == i else 0.0 for j in range(size)) for i in range(size)
    )
    return ScaleTransform(source, target, rows)


def questionnaire_to_common(
    source: str = "questionnaire5", target: str = "common5"
) -> ScaleTransform:
    """The direct 5-to-5 grade equivalence; utilities are preserved exactly."""
    return identity_transform(source, target, 5)


def interview_to_common(
    source: str = "interview3", target: str = "common5"
) -> ScaleTransform:
    """Expand the 3-grade interview scale to the 5-grade common scale.

    The middle grade splits 0.25 / 0.50 / 0.25 over the three middle common
    grades, which preserves its 0.5 utility on evenly spaced utilities.
    """
    return ScaleTransform(
        source,
        target,
        (
            (1.0, 0.0, 0.0, 0.0, 0.0),
            (0.0, 0.25, 0.50, 0.25, 0.0),
            (0.0, 0.0, 0.0, 0.0, 1.0),
        ),
    )


def transform_from_anchor_rules(
    source: str,
    target: str,
    source_size: int,
    target_size: int,
    rules: Sequence[tuple[Sequence[float], int]],
) -> ScaleTransform:
    """Solve a transform from anchor rules of the form "source belief pattern
    is fully equivalent to one target grade".

    Each rule pairs an anchor vector over the source grades with the index of
    the target grade it stands for; every target grade must appear exactly
    once. Anchors are normalized to sum 1 and collected into the matrix B
    whose row t is the source decomposition of target grade t. The transform
    T is the unique nonnegative solution of T @ B = I, i.e. pushing a source
    assessment to the target scale and re-expanding it through the rules
    returns the original assessment. Unit anchors therefore pin their rows
    directly, while mixed anchors describe target grades reachable only by
    mixtures of source grades.
    """
    if len(rules) != target_size:
        raise TransformError(
            f"{len(rules)} rules for {target_size} target grades"
        )
    seen: set[int] = set()
    decomposition = np.zeros((target_size, source_size))
    for anchor, target_grade in rules:
        if not 0 <= target_grade < target_size:
            raise TransformError(f"target grade index {target_grade} out of range")
        if target_grade in seen:
            raise TransformError(f"target grade {target_grade} appears in two rules")
        seen.add(target_grade)
        vec = np.asarray(anchor, dtype=float)
        if vec.shape != (source_size,):
            raise TransformError(f"anchor {anchor!r} has wrong length")
        if (vec < 0).any():
            raise TransformError(f"anchor {anchor!r} has negative entries")
        total = vec.sum()
        if total <= 0:
            raise TransformError(f"anchor {anchor!r} is all zero")
        decomposition[target_grade] = vec / total
    if np.linalg.matrix_rank(decomposition, tol=_RANK_TOL) < source_size:
        raise TransformError(
            "anchors are linearly dependent: they do not span the source scale, "
            "so no unique transform exists"
        )
    rows = []
    for i in range(source_size):
        unit = np.zeros(source_size)
        unit[i] = 1.0
        row, residual = nnls(decomposition.T, unit)
        if residual > _RANK_TOL:
            raise TransformError(
                f"rules are inconsistent with a valid belief transform: source "
                f"grade {i} cannot be expressed as a nonnegative mixture of the "
                f"anchors (residual {residual:.3g})"
            )
        row = np.where(np.abs(row) < _ROW_TOL, 0.0, row)
        rows.append(tuple(float(v) for v in row / row.sum()))
    return ScaleTransform(source, target, tuple(rows))


def apply_transform(t: ScaleTransform, d: BeliefDistribution) -> BeliefDistribution:
    """Push a belief distribution through a transform.

    Linear in the beliefs; the ignorance mass is carried through unchanged,
    never redistributed onto grades, so total assigned mass is conserved.
    """
    if d.scale != t.source:
        raise TransformError(
            f"distribution on scale {d.scale!r}, transform expects {t.source!r}"
        )
    if len(d.beliefs) != len(t.matrix):
        raise TransformError(
            f"{len(d.beliefs)} beliefs for a {len(t.matrix)}-row transform"
        )
    width = len(t.matrix[0])
    out = [0.0] * width
    for belief, row in zip(d.beliefs, t.matrix):
        if belief:
            for j in range(width):
                out[j] += belief * row[j]
    return BeliefDistribution(t.target, tuple(out), d.ignorance)
