"""Command-line pipeline: clean, derive, weigh, aggregate, rank, report.

`ermcda run` executes the whole pipeline and writes a deterministic report
bundle; `ermcda explain` re-derives one node of a finished run step by step;
`ermcda serve` starts the what-if HTTP service.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Sequence

import click

from ermcda import corpus, engine, pipeline
from ermcda.beliefs import BeliefDistribution, expected_utility
from ermcda.errors import ErmcdaError, ModelError
from ermcda.hierarchy import BOTTOM
from ermcda.ingest import (
    Model,
    Rejection,
    load_interview_csv,
    load_model,
    load_questionnaire_csv,
)

RESULTS_SCHEMA = "er-mcda-results/1"
SOFT_DEVIATION_BOUND = 0.10


def _fail(category: str, message: str) -> None:
    click.echo(f"ermcda: error [{category}]: {message}", err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Multi-criteria evidential-reasoning engine."""


def _load_inputs(
    model_path: Path | None,
    questionnaires: Path | None,
    interviews: Path | None,
):
    model = load_model(model_path or corpus.paper_model_path())
    q_records, q_rejections = load_questionnaire_csv(
        questionnaires or corpus.paper_questionnaires_path(),
        scale_size=max(s.size for s in model.scales.values()),
    )
    groups = tuple(
        dict.fromkeys(
            b.source.group
            for b in model.tree.bottoms()
            if b.source and b.source.stream == "interviews" and b.source.group
        )
    )
    i_records, i_rejections = load_interview_csv(
        interviews or corpus.paper_interviews_path(),
        valid_groups=groups or None,
    )
    return model, q_records, q_rejections, i_records, i_rejections


def _check_rejections(
    q_records, q_rejections, i_records, i_rejections, threshold: float
) -> None:
    accepted = len(q_records) + len(i_records)
    rejected = len(q_rejections) + len(i_rejections)
    if accepted == 0:
        _fail("no-data", "no accepted records")
    if rejected and rejected / (accepted + rejected) > threshold:
        lines = "; ".join(
            f"line {r.line}: {r.reason}" for r in (q_rejections + i_rejections)[:5]
        )
        _fail(
            "data-rejected",
            f"{rejected} of {accepted + rejected} rows rejected "
            f"(threshold {threshold}): {lines}",
        )


@main.command("run")
@click.option("--model", "model_path", type=click.Path(path_type=Path), default=None,
              help="Model file (defaults to the bundled reproduction model).")
@click.option("--questionnaires", type=click.Path(path_type=Path), default=None,
              help="Questionnaire CSV (defaults to the bundled dataset).")
@click.option("--interviews", type=click.Path(path_type=Path), default=None,
              help="Interview CSV (defaults to the bundled dataset).")
@click.option("--interview-weight", type=click.FloatRange(0.0, 1.0), default=None,
              help="Top-level interview branch weight (default: the model's, 0.6).")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("ermcda-out"),
              show_default=True, help="Directory for the report bundle.")
@click.option("--reject-threshold", type=click.FloatRange(0.0, 1.0), default=0.0,
              show_default=True, help="Tolerated fraction of rejected data rows.")
@click.option("--explain", "explain_target", nargs=2, type=str, default=None,
              help="NODE ALTERNATIVE: print a derivation trace after the run.")
def run_command(
    model_path: Path | None,
    questionnaires: Path | None,
    interviews: Path | None,
    interview_weight: float | None,
    out_dir: Path,
    reject_threshold: float,
    explain_target: tuple[str, str] | None,
) -> None:
    """Run the six-step pipeline and write the report bundle."""
    try:
        model, q_records, q_rej, i_records, i_rej = _load_inputs(
            model_path, questionnaires, interviews
        )
    except ModelError as exc:
        _fail("model-invalid", str(exc))
    except ErmcdaError as exc:
        _fail("io-error", str(exc))
    _check_rejections(q_records, q_rej, i_records, i_rej, reject_threshold)
    try:
        result = pipeline.run(model, q_records, i_records, interview_weight)
    except ErmcdaError as exc:
        _fail("engine-error", str(exc))

    _write_bundle(out_dir, model, result, q_rej, i_rej)
    for line in _ranking_lines(model, result):
        click.echo(line)
    click.echo(f"report bundle written to {out_dir}")

    if explain_target:
        node, alternative = explain_target
        try:
            for line in _explain_lines(model, result, node, alternative):
                click.echo(line)
        except ErmcdaError as exc:
            _fail("engine-error", str(exc))


@main.command("explain")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True,
              help="Report bundle directory of a completed run.")
@click.argument("node")
@click.argument("alternative")
def explain_command(out_dir: Path, node: str, alternative: str) -> None:
    """Re-derive one node of a completed run, step by step."""
    results_path = out_dir / "results.json"
    if not results_path.exists():
        _fail("io-error", f"no completed run at {out_dir} (missing results.json)")
    stored = json.loads(results_path.read_text(encoding="utf-8"))
    if stored.get("schema") != RESULTS_SCHEMA:
        _fail("io-error", f"unsupported results schema {stored.get('schema')!r}")
    try:
        for line in _explain_stored(stored, node, alternative):
            click.echo(line)
    except ErmcdaError as exc:
        _fail("engine-error", str(exc))


@main.command("serve")
@click.option("--model", "model_path", type=click.Path(path_type=Path), default=None)
@click.option("--questionnaires", type=click.Path(path_type=Path), default=None)
@click.option("--interviews", type=click.Path(path_type=Path), default=None)
@click.option("--interview-weight", type=click.FloatRange(0.0, 1.0), default=None)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve_command(
    model_path: Path | None,
    questionnaires: Path | None,
    interviews: Path | None,
    interview_weight: float | None,
    host: str,
    port: int,
) -> None:
    """Serve the evaluation and what-if API over HTTP."""
    import uvicorn

    from ermcda.api import create_app

    try:
        model, q_records, q_rej, i_records, i_rej = _load_inputs(
            model_path, questionnaires, interviews
        )
    except ModelError as exc:
        _fail("model-invalid", str(exc))
    except ErmcdaError as exc:
        _fail("io-error", str(exc))
    _check_rejections(q_records, q_rej, i_records, i_rej, 0.0)
    app = create_app(model, q_records, i_records, interview_weight=interview_weight)
    uvicorn.run(app, host=host, port=port)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def _dist_row(d: BeliefDistribution) -> list[str]:
    return [_fmt(b) for b in d.beliefs] + [_fmt(d.ignorance)]


def _ranking_lines(model: Model, result: pipeline.RunResult) -> list[str]:
    lines = ["ranking (expected utility):"]
    for position, entry in enumerate(result.ranking, start=1):
        lines.append(
            f"  {position}. {entry.name}  u={_fmt(entry.utility.mean_assigned)}"
            f"  [{_fmt(entry.utility.min)}, {_fmt(entry.utility.max)}]"
        )
    return lines


def _write_bundle(
    out_dir: Path,
    model: Model,
    result: pipeline.RunResult,
    q_rejections: Sequence[Rejection],
    i_rejections: Sequence[Rejection],
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    common = model.common_scale
    grade_columns = list(common.labels) + ["ignorance"]

    def csv_line(cells: Sequence[str]) -> str:
        return ",".join(
            f'"{c}"' if ("," in c or '"' in c) else c for c in cells
        )

    ranking_rows = [csv_line(["rank", "alternative", "expected_utility", "utility_min", "utility_max"])]
    chart_rows = [csv_line(["alternative", "expected_utility"])]
    for position, entry in enumerate(result.ranking, start=1):
        ranking_rows.append(csv_line([
            str(position), entry.name, _fmt(entry.utility.mean_assigned),
            _fmt(entry.utility.min), _fmt(entry.utility.max),
        ]))
        chart_rows.append(csv_line([entry.name, _fmt(entry.utility.mean_assigned)]))
    (out_dir / "ranking.csv").write_text("\n".join(ranking_rows) + "\n", encoding="utf-8")
    (out_dir / "chart_ranking.csv").write_text("\n".join(chart_rows) + "\n", encoding="utf-8")

    node_rows = [csv_line(["alternative", "node", "kind"] + grade_columns)]
    root_rows = [csv_line(["alternative"] + grade_columns)]
    stacked_rows = [csv_line(["alternative", "grade", "belief", "utility"])]
    for alt in result.alternatives:
        for attr in model.tree.postorder():
            d = result.nodes[alt][attr.id]
            node_rows.append(csv_line([alt, attr.id, attr.kind] + _dist_row(d)))
        root = result.root_distribution(alt)
        root_rows.append(csv_line([alt] + _dist_row(root)))
        for label, belief, utility in zip(common.labels, root.beliefs, common.utilities):
            stacked_rows.append(csv_line([alt, label, _fmt(belief), _fmt(utility)]))
        stacked_rows.append(csv_line([alt, "ignorance", _fmt(root.ignorance), ""]))
    (out_dir / "nodes.csv").write_text("\n".join(node_rows) + "\n", encoding="utf-8")
    (out_dir / "roots.csv").write_text("\n".join(root_rows) + "\n", encoding="utf-8")
    (out_dir / "chart_distributions.csv").write_text(
        "\n".join(stacked_rows) + "\n", encoding="utf-8"
    )

    (out_dir / "report.txt").write_text(
        "\n".join(_report_lines(model, result, q_rejections, i_rejections)) + "\n",
        encoding="utf-8",
    )
    (out_dir / "results.json").write_text(
        json.dumps(_results_payload(model, result, q_rejections, i_rejections),
                   indent=2, sort_keys=False) + "\n",
        encoding="utf-8",
    )


def _report_lines(
    model: Model,
    result: pipeline.RunResult,
    q_rejections: Sequence[Rejection],
    i_rejections: Sequence[Rejection],
) -> list[str]:
    common = model.common_scale
    lines = [
        "evidential-reasoning assessment report",
        f"interview branch weight: {_fmt(result.interview_weight)}",
        "",
    ]
    lines.extend(_ranking_lines(model, result))
    lines.append("")
    lines.append("root distributions (common scale):")
    header = "  ".join(f"{label[:18]:>18}" for label in list(common.labels) + ["ignorance"])
    lines.append(f"  {'alternative':<12} {header}")
    for alt in result.alternatives:
        root = result.root_distribution(alt)
        cells = "  ".join(f"{v:>18.6f}" for v in list(root.beliefs) + [root.ignorance])
        lines.append(f"  {alt:<12} {cells}")
    if result.deviations:
        lines.append("")
        lines.append(
            "per-grade deviation from the reference distributions "
            "(computed - reference):"
        )
        worst = 0.0
        for alt in result.alternatives:
            if alt not in result.deviations:
                continue
            deviations = result.deviations[alt]
            worst = max(worst, max(abs(d) for d in deviations))
            cells = "  ".join(f"{v:>+18.6f}" for v in deviations)
            lines.append(f"  {alt:<12} {cells}")
        lines.append(f"  max |deviation|: {worst:.6f}")
        if worst > SOFT_DEVIATION_BOUND:
            lines.append(
                f"  warning: exceeds the soft bound {SOFT_DEVIATION_BOUND}; the"
                " reference weights are not recoverable, ranking order is the"
                " hard criterion"
            )
    lines.append("")
    total_rejected = len(q_rejections) + len(i_rejections)
    lines.append(f"data cleaning: {total_rejected} rejected row(s)")
    for name, rejections in (("questionnaires", q_rejections), ("interviews", i_rejections)):
        for rejection in rejections:
            lines.append(f"  {name} line {rejection.line}: {rejection.reason}")
    return lines


def _results_payload(
    model: Model,
    result: pipeline.RunResult,
    q_rejections: Sequence[Rejection],
    i_rejections: Sequence[Rejection],
) -> dict:
    common = model.common_scale
    tree_entries = []
    for attr in model.tree.attributes.values():
        entry: dict = {"id": attr.id, "name": attr.name, "kind": attr.kind}
        if attr.children:
            entry["children"] = list(attr.children)
        if attr.scale:
            entry["scale"] = attr.scale
            entry["transform"] = attr.transform
        tree_entries.append(entry)
    leaves = {
        alt: {
            attr_id: {"scale": d.scale, "beliefs": list(d.beliefs), "ignorance": d.ignorance}
            for attr_id, d in result.leaves[alt].items()
        }
        for alt in result.alternatives
    }
    nodes = {
        alt: {
            node_id: {"beliefs": list(d.beliefs), "ignorance": d.ignorance}
            for node_id, d in result.nodes[alt].items()
        }
        for alt in result.alternatives
    }
    return {
        "schema": RESULTS_SCHEMA,
        "common_scale": {
            "id": common.id,
            "labels": list(common.labels),
            "utilities": list(common.utilities),
        },
        "root": model.tree.root,
        "alternatives": list(result.alternatives),
        "interview_weight": result.interview_weight,
        "tree": tree_entries,
        "weights": result.weights,
        "leaves": leaves,
        "nodes": nodes,
        "ranking": [
            {
                "alternative": entry.name,
                "expected_utility": entry.utility.mean_assigned,
                "utility_min": entry.utility.min,
                "utility_max": entry.utility.max,
            }
            for entry in result.ranking
        ],
        "deviations": {alt: list(d) for alt, d in result.deviations.items()},
        "rejections": {
            "questionnaires": [{"line": r.line, "reason": r.reason} for r in q_rejections],
            "interviews": [{"line": r.line, "reason": r.reason} for r in i_rejections],
        },
    }


def _trace_mass_line(label: str, masses, grades: Sequence[str]) -> str:
    cells = " ".join(f"{g}={m:.6f}" for g, m in zip(grades, masses.masses))
    return (
        f"  {label}: {cells} residual_weight={masses.residual_weight_mass:.6f}"
        f" ignorance={masses.ignorance_mass:.6f}"
    )


def _explain_lines(
    model: Model, result: pipeline.RunResult, node: str, alternative: str
) -> list[str]:
    if alternative not in result.nodes:
        raise ModelError(
            f"unknown alternative {alternative!r}; valid: {sorted(result.nodes)}"
        )
    if node not in model.tree.attributes:
        raise ModelError(
            f"unknown node {node!r}; valid: {sorted(model.tree.attributes)}"
        )
    attr = model.tree[node]
    common = model.common_scale
    lines = [f"derivation of {node!r} ({attr.name}) for alternative {alternative!r}"]
    if attr.kind == BOTTOM:
        raw = result.leaves[alternative][node]
        scale = model.scales[attr.scale]
        lines.append(f"  source scale {scale.id!r}: beliefs "
                     + " ".join(f"{l}={b:.6f}" for l, b in zip(scale.labels, raw.beliefs))
                     + f" ignorance={raw.ignorance:.6f}")
        lines.append(f"  transform {attr.transform!r} to the common scale:")
        transformed = result.nodes[alternative][node]
        lines.append("  " + _distribution_text(transformed, common.labels))
        return lines

    weight_map = result.weights[alternative]
    pairs = [
        (result.nodes[alternative][child.id], weight_map.get(child.id, child.weight))
        for child in model.tree.children_of(node)
    ]
    combined, child_masses, steps = engine.combine_detailed(pairs)
    lines.append("  children (weight, distribution on the common scale):")
    for child, masses in zip(model.tree.children_of(node), child_masses):
        d = result.nodes[alternative][child.id]
        lines.append(
            f"    {child.id:<10} w={weight_map.get(child.id, child.weight):.6f}  "
            + _distribution_text(d, common.labels)
        )
    lines.append("  discounted masses per child:")
    for child, masses in zip(model.tree.children_of(node), child_masses):
        lines.append(_trace_mass_line(child.id, masses, common.labels))
    lines.append("  fold (conflict renormalization factor K per step):")
    for step in steps:
        child_id = model.tree[node].children[step.child_index]
        lines.append(
            f"    + {child_id}: conflict={step.conflict:.6f} K={step.scaling:.6f}"
        )
        lines.append(_trace_mass_line("    accumulated", step.result, common.labels))
    stored = result.nodes[alternative][node]
    if tuple(combined.beliefs) != tuple(stored.beliefs) or combined.ignorance != stored.ignorance:
        raise ModelError(
            f"trace for {node!r} does not reproduce the stored distribution"
        )
    lines.append("  result: " + _distribution_text(combined, common.labels))
    utility = expected_utility(stored, common)
    lines.append(
        f"  expected utility {utility.mean_assigned:.6f}"
        f" [{utility.min:.6f}, {utility.max:.6f}]"
    )
    return lines


def _distribution_text(d: BeliefDistribution, labels: Sequence[str]) -> str:
    cells = " ".join(f"{l}={b:.6f}" for l, b in zip(labels, d.beliefs))
    return f"{cells} ignorance={d.ignorance:.6f}"


def _explain_stored(stored: dict, node: str, alternative: str) -> list[str]:
    nodes = stored.get("nodes", {})
    if alternative not in nodes:
        raise ModelError(
            f"unknown alternative {alternative!r}; valid: {sorted(nodes)}"
        )
    attrs = {entry["id"]: entry for entry in stored.get("tree", [])}
    if node not in attrs:
        raise ModelError(f"unknown node {node!r}; valid: {sorted(attrs)}")
    entry = attrs[node]
    labels = stored["common_scale"]["labels"]
    scale_id = stored["common_scale"]["id"]
    lines = [f"derivation of {node!r} ({entry['name']}) for alternative {alternative!r}"]
    if entry["kind"] == BOTTOM:
        leaf = stored["leaves"][alternative][node]
        lines.append(
            f"  source scale {leaf['scale']!r}: beliefs "
            + " ".join(f"{b:.6f}" for b in leaf["beliefs"])
            + f" ignorance={leaf['ignorance']:.6f}"
        )
        stored_node = nodes[alternative][node]
        d = BeliefDistribution(scale_id, tuple(stored_node["beliefs"]), stored_node["ignorance"])
        lines.append(f"  transform {entry['transform']!r} to the common scale:")
        lines.append("  " + _distribution_text(d, labels))
        return lines
    weight_map = stored["weights"][alternative]
    pairs = []
    for child_id in entry.get("children", []):
        child_node = nodes[alternative][child_id]
        pairs.append(
            (
                BeliefDistribution(scale_id, tuple(child_node["beliefs"]), child_node["ignorance"]),
                weight_map[child_id],
            )
        )
    combined, child_masses, steps = engine.combine_detailed(pairs)
    lines.append("  children (weight, distribution on the common scale):")
    for child_id, (d, w) in zip(entry.get("children", []), pairs):
        lines.append(f"    {child_id:<10} w={w:.6f}  " + _distribution_text(d, labels))
    lines.append("  discounted masses per child:")
    for child_id, masses in zip(entry.get("children", []), child_masses):
        lines.append(_trace_mass_line(child_id, masses, labels))
    lines.append("  fold (conflict renormalization factor K per step):")
    for step in steps:
        child_id = entry["children"][step.child_index]
        lines.append(f"    + {child_id}: conflict={step.conflict:.6f} K={step.scaling:.6f}")
        lines.append(_trace_mass_line("    accumulated", step.result, labels))
    stored_node = nodes[alternative][node]
    if list(combined.beliefs) != list(stored_node["beliefs"]) or combined.ignorance != stored_node["ignorance"]:
        raise ModelError(f"trace for {node!r} does not reproduce the stored distribution")
    lines.append("  result: " + _distribution_text(combined, labels))
    return lines


if __name__ == "__main__":
    main()
