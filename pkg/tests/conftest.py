from __future__ import annotations

import json
from pathlib import Path

import pytest

from ermcda import corpus, ingest
from ermcda.scales import make_scale

DATA_DIR = Path(__file__).parent / "data"


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\n[criterion] {name}: {outcome}")


@pytest.fixture(scope="session")
def paper_model() -> ingest.Model:
    return ingest.load_model(corpus.paper_model_path())


@pytest.fixture(scope="session")
def paper_questionnaires() -> list[ingest.QuestionnaireRecord]:
    records, rejections = ingest.load_questionnaire_csv(corpus.paper_questionnaires_path())
    assert not rejections
    return records


@pytest.fixture(scope="session")
def paper_interviews() -> list[ingest.InterviewRecord]:
    records, rejections = ingest.load_interview_csv(corpus.paper_interviews_path())
    assert not rejections
    return records


@pytest.fixture(scope="session")
def questionnaire_scale():
    return make_scale(
        "questionnaire5",
        ["Worst", "Poor", "Average", "Good", "Excellent"],
        [0.0, 0.25, 0.5, 0.75, 1.0],
    )


@pytest.fixture(scope="session")
def interview_scale():
    return make_scale("interview3", ["Minimal", "Average", "Excellent"], [0.0, 0.5, 1.0])


@pytest.fixture(scope="session")
def common_scale():
    return make_scale(
        "common5",
        [
            "Analytics Ignorance",
            "Analytics focused",
            "Analytical aspirations",
            "Systemic analytics",
            "Analytics as competitive advantages",
        ],
        [0.0, 0.25, 0.5, 0.75, 1.0],
    )


@pytest.fixture(scope="session")
def questionnaire_reference_rows() -> list[dict]:
    doc = json.loads((DATA_DIR / "reference_questionnaire_beliefs.json").read_text())
    return doc["rows"]


@pytest.fixture(scope="session")
def interview_reference_rows() -> list[dict]:
    doc = json.loads((DATA_DIR / "reference_interview_beliefs.json").read_text())
    return doc["rows"]
