"""Regenerate the UI test fixtures from the live service and CLI.

Run from the repository root with the ermcda package installed:

    python frontend/scripts/make_fixtures.py

Writes frontend/tests/fixtures/{model,baseline,whatif_0.5,cli_ranking}.json.
The CLI ranking comes from an actual `ermcda run` bundle so the round-trip
test compares UI-displayed numbers against the CLI's own output.
"""

from __future__ import annotations

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from ermcda import corpus
from ermcda.api import create_app
from ermcda.ingest import load_interview_csv, load_model, load_questionnaire_csv

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"


def main() -> None:
    model = load_model(corpus.paper_model_path())
    q_records, _ = load_questionnaire_csv(corpus.paper_questionnaires_path())
    i_records, _ = load_interview_csv(corpus.paper_interviews_path())
    client = TestClient(create_app(model, q_records, i_records))

    FIXTURES.mkdir(parents=True, exist_ok=True)
    dump = lambda name, body: (FIXTURES / name).write_text(
        json.dumps(body, indent=2) + "\n", encoding="utf-8"
    )
    dump("model.json", client.get("/model").json())
    dump("baseline.json", client.get("/evaluate").json())
    response = client.post("/whatif", json={"interview_weight": 0.5})
    response.raise_for_status()
    dump("whatif_0.5.json", response.json())

    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "bundle"
        subprocess.run(
            [sys.executable, "-m", "ermcda.cli", "run", "--out", str(out)],
            check=True,
            capture_output=True,
        )
        results = json.loads((out / "results.json").read_text(encoding="utf-8"))
    dump("cli_ranking.json", {"ranking": results["ranking"]})
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
