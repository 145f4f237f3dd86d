"""HTTP service for model inspection and what-if re-weighting.

Stateless between requests: the loaded model and records are immutable, every
what-if evaluation recomputes from them, and identical requests return
identical bodies. Overrides never touch the baseline.
"""

from __future__ import annotations

from typing import Sequence

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel as RequestModel

from ermcda import pipeline
from ermcda.errors import ErmcdaError
from ermcda.hierarchy import PARENT
from ermcda.ingest import InterviewRecord, Model, QuestionnaireRecord

API_SCHEMA = "er-mcda-api/1"


class WhatIfRequest(RequestModel):
    interview_weight: float | None = None
    sibling_weights: dict[str, dict[str, float]] | None = None
    utilities: dict[str, list[float]] | None = None


def _results_body(model: Model, result: pipeline.RunResult) -> dict:
    return {
        "schema": API_SCHEMA,
        "interview_weight": result.interview_weight,
        "alternatives": list(result.alternatives),
        "root": result.root_id,
        "ranking": [
            {
                "alternative": entry.name,
                "expected_utility": entry.utility.mean_assigned,
                "utility_min": entry.utility.min,
                "utility_max": entry.utility.max,
            }
            for entry in result.ranking
        ],
        "nodes": {
            alt: {
                node_id: {"beliefs": list(d.beliefs), "ignorance": d.ignorance}
                for node_id, d in result.nodes[alt].items()
            }
            for alt in result.alternatives
        },
        "weights": result.weights,
        "deviations": {alt: list(d) for alt, d in result.deviations.items()},
    }


def _model_body(model: Model, baseline: pipeline.RunResult) -> dict:
    common = model.common_scale
    attributes = []
    for attr in model.tree.attributes.values():
        entry: dict = {"id": attr.id, "name": attr.name, "kind": attr.kind}
        if attr.children:
            entry["children"] = list(attr.children)
        if attr.scale:
            entry["scale"] = attr.scale
            entry["transform"] = attr.transform
        attributes.append(entry)
    sibling_groups = {
        attr.id: list(attr.children)
        for attr in model.tree.attributes.values()
        if attr.kind == PARENT and attr.children
    }
    return {
        "schema": API_SCHEMA,
        "root": model.tree.root,
        "common_scale": {
            "id": common.id,
            "labels": list(common.labels),
            "utilities": list(common.utilities),
        },
        "scales": {
            scale.id: {"labels": list(scale.labels), "utilities": list(scale.utilities)}
            for scale in model.scales.values()
        },
        "attributes": attributes,
        "sibling_groups": sibling_groups,
        "alternatives": list(baseline.alternatives),
        "interview_weight": baseline.interview_weight,
        "weights": baseline.weights,
        "references": {alt: list(v) for alt, v in model.references.items()},
    }


def create_app(
    model: Model,
    questionnaire_records: Sequence[QuestionnaireRecord],
    interview_records: Sequence[InterviewRecord],
    interview_weight: float | None = None,
) -> FastAPI:
    """Build the service around one loaded model and corpus."""
    baseline = pipeline.run(
        model, questionnaire_records, interview_records, interview_weight
    )
    baseline_body = _results_body(model, baseline)
    model_body = _model_body(model, baseline)

    app = FastAPI(title="ermcda what-if service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "schema": API_SCHEMA}

    @app.get("/model")
    def model_summary() -> dict:
        return model_body

    @app.get("/evaluate")
    def evaluate_baseline() -> dict:
        return baseline_body

    @app.post("/whatif")
    def what_if(request: WhatIfRequest) -> dict:
        if request.interview_weight is not None and not (
            0.0 <= request.interview_weight <= 1.0
        ):
            raise HTTPException(
                status_code=400,
                detail=f"interview_weight {request.interview_weight} outside [0, 1]",
            )
        try:
            result = pipeline.run(
                model,
                questionnaire_records,
                interview_records,
                interview_weight=(
                    request.interview_weight
                    if request.interview_weight is not None
                    else interview_weight
                ),
                sibling_overrides=request.sibling_weights,
                utility_overrides=request.utilities,
            )
        except ErmcdaError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return _results_body(model, result)

    return app
