"""Paths to the bundled reproduction corpus (model file plus both datasets)."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

_PAPER_DIR = "data/paper"


def _resource(name: str) -> Path:
    resource = files("ermcda").joinpath(f"{_PAPER_DIR}/{name}")
    return Path(str(resource))


def paper_model_path() -> Path:
    return _resource("model.json")


def paper_questionnaires_path() -> Path:
    return _resource("questionnaires.csv")


def paper_interviews_path() -> Path:
    return _resource("interviews.csv")
