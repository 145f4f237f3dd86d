from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ermcda import corpus
from ermcda.errors import DataError, ModelError
from ermcda.hierarchy import PARENT
from ermcda.ingest import (
    InterviewRecord,
    clean_interview_rows,
    clean_questionnaire_rows,
    interview_frequency_to_mean,
    leaves_from_records,
    load_model,
)


class TestLoadModel:
    def test_bundled_model_shape(self, paper_model):
        tree = paper_model.tree
        bottoms = tree.bottoms()
        assert len(bottoms) == 42
        q_bottoms = [b for b in bottoms if b.source.stream == "questionnaires"]
        i_bottoms = [b for b in bottoms if b.source.stream == "interviews"]
        assert len(q_bottoms) == 17
        assert len(i_bottoms) == 25
        parents = [a for a in tree.attributes.values() if a.kind == PARENT]
        assert len(parents) == 10  # root + 2 branches + 4 + 3 groups
        assert paper_model.interview_weight == 0.6
        assert paper_model.common_scale.size == 5
        assert set(paper_model.references) == {"Micro", "Small", "Medium", "Large"}

    def test_unknown_schema_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(json.dumps({"schema": "er-mcda/99"}))
        with pytest.raises(ModelError, match="schema"):
            load_model(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ModelError, match="not found"):
            load_model(tmp_path / "nope.json")

    def test_bottom_with_unknown_transform(self, tmp_path):
        raw = json.loads(corpus.paper_model_path().read_text())
        raw["tree"]["attributes"][-1]["transform"] = "ghost"
        path = tmp_path / "model.json"
        path.write_text(json.dumps(raw))
        with pytest.raises(ModelError, match="ghost"):
            load_model(path)

    def test_anchor_rules_transform_kind(self, tmp_path):
        raw = json.loads(corpus.paper_model_path().read_text())
        raw["transforms"]["interview_to_common"] = {
            "kind": "anchor-rules",
            "source": "interview3",
            "target": "common5",
            "rules": [
                {"anchor": {"Minimal": 1.0}, "target": "Analytics Ignorance"},
                {"anchor": {"Minimal": 0.125, "Average": 0.125}, "target": "Analytics focused"},
                {"anchor": {"Average": 0.5}, "target": "Analytical aspirations"},
                {"anchor": {"Average": 0.375, "Excellent": 0.375}, "target": "Systemic analytics"},
                {"anchor": {"Excellent": 1.0}, "target": "Analytics as competitive advantages"},
            ],
        }
        path = tmp_path / "model.json"
        path.write_text(json.dumps(raw))
        model = load_model(path)
        t = model.transforms["interview_to_common"]
        assert t.matrix[0] == (1.0, 0.0, 0.0, 0.0, 0.0)
        assert t.matrix[1] == (0.0, 0.0, 1.0, 0.0, 0.0)
        assert t.matrix[2] == (0.0, 0.0, 0.0, 0.0, 1.0)


class TestClean:
    def test_missing_mean_rejected(self):
        rows = [{"alternative": "A", "item_code": "X1", "n": "5", "mean": ""}]
        records, rejections = clean_questionnaire_rows(rows)
        assert not records
        assert rejections[0].reason == "missing mean"
        assert rejections[0].line == 2

    def test_duplicate_rejected_second_only(self):
        rows = [
            {"alternative": "A", "item_code": "X1", "n": "5", "mean": "2.0"},
            {"alternative": "A", "item_code": "X1", "n": "6", "mean": "3.0"},
        ]
        records, rejections = clean_questionnaire_rows(rows)
        assert len(records) == 1 and records[0].mean == 2.0
        assert "duplicate" in rejections[0].reason

    def test_non_numeric_and_out_of_range(self):
        rows = [
            {"alternative": "A", "item_code": "X1", "n": "5", "mean": "abc"},
            {"alternative": "A", "item_code": "X2", "n": "5", "mean": "7.2"},
            {"alternative": "A", "item_code": "X3", "n": "-1", "mean": "2.0"},
        ]
        records, rejections = clean_questionnaire_rows(rows)
        assert not records
        assert len(rejections) == 3

    def test_interview_bad_group(self):
        rows = [{"group": "X-X", "concept": "c", "frequency": "3"}]
        records, rejections = clean_interview_rows(rows)
        assert not records and "invalid group" in rejections[0].reason

    def test_accepted_rows_keep_input_order(self):
        rows = [
            {"group": "T-A", "concept": "b", "frequency": "3"},
            {"group": "O-A", "concept": "a", "frequency": "9"},
        ]
        records, rejections = clean_interview_rows(rows)
        assert [r.concept for r in records] == ["b", "a"]
        assert not rejections

    def test_bundled_corpus_is_clean(self, paper_questionnaires, paper_interviews):
        assert len(paper_questionnaires) == 68  # 17 items x 4 alternatives
        assert len(paper_interviews) == 25


class TestInterviewFrequencyToMean:
    def test_peak_maps_to_top_grade(self, paper_interviews):
        o_a = [r for r in paper_interviews if r.group == "O-A"]
        means = interview_frequency_to_mean(o_a)
        assert means[0] == pytest.approx(3.00, abs=1e-12)  # frequency 20 of max 20

    def test_known_scalings(self, paper_interviews):
        t_a = [r for r in paper_interviews if r.group == "T-A"]
        means = dict(zip((r.concept for r in t_a), interview_frequency_to_mean(t_a)))
        assert means["Improving results"] == pytest.approx(17 * 3 / 22, abs=1e-12)
        o_v = [r for r in paper_interviews if r.group == "O-V"]
        means = dict(zip((r.concept for r in o_v), interview_frequency_to_mean(o_v)))
        assert means["Serving the society"] == pytest.approx(12 * 3 / 13, abs=1e-12)

    def test_empty_group_rejected(self):
        with pytest.raises(DataError, match="empty"):
            interview_frequency_to_mean([])

    def test_zero_peak_rejected(self):
        records = [InterviewRecord("O-A", "c", 0)]
        with pytest.raises(DataError, match="positive"):
            interview_frequency_to_mean(records)

    def test_mixed_groups_rejected(self):
        records = [InterviewRecord("O-A", "a", 3), InterviewRecord("T-A", "b", 3)]
        with pytest.raises(DataError, match="several groups"):
            interview_frequency_to_mean(records)

    @given(multiplier=st.integers(2, 50))
    def test_scale_equivariance(self, multiplier):
        base = [InterviewRecord("O-A", f"c{i}", f) for i, f in enumerate((8, 5, 2))]
        scaled = [
            InterviewRecord("O-A", r.concept, r.frequency * multiplier) for r in base
        ]
        assert interview_frequency_to_mean(scaled) == pytest.approx(
            interview_frequency_to_mean(base), abs=1e-12
        )


class TestLeavesFromRecords:
    def test_full_corpus_counts(self, paper_model, paper_questionnaires, paper_interviews):
        leaves = leaves_from_records(paper_model, paper_questionnaires, paper_interviews)
        assert set(leaves) == {"Micro", "Small", "Medium", "Large"}
        for alt, dists in leaves.items():
            assert len(dists) == 42

    def test_questionnaire_leaf_values(self, paper_model, paper_questionnaires, paper_interviews):
        leaves = leaves_from_records(paper_model, paper_questionnaires, paper_interviews)
        db_ca5 = leaves["Micro"]["DB-CA5"]
        assert db_ca5.beliefs == pytest.approx((0.0, 0.930, 0.070, 0.0, 0.0), abs=0.015)

    def test_interview_leaf_values(self, paper_model, paper_questionnaires, paper_interviews):
        leaves = leaves_from_records(paper_model, paper_questionnaires, paper_interviews)
        online = leaves["Micro"]["OA2"]  # tally 15 of peak 20 -> mean 2.25
        assert online.beliefs == pytest.approx((0.0, 0.75, 0.25), abs=1e-12)
        high_tech = leaves["Micro"]["OA7"]  # tally 6 -> mean 0.9, clamped
        assert high_tech.beliefs == (1.0, 0.0, 0.0)

    def test_interview_leaves_shared_across_alternatives(
        self, paper_model, paper_questionnaires, paper_interviews
    ):
        leaves = leaves_from_records(paper_model, paper_questionnaires, paper_interviews)
        for attr_id in ("OA1", "TA4", "OV5"):
            values = {leaves[alt][attr_id].beliefs for alt in leaves}
            assert len(values) == 1

    def test_missing_record_detected(self, paper_model, paper_questionnaires, paper_interviews):
        partial = [r for r in paper_questionnaires if r.item_code != "SYS4"]
        with pytest.raises(DataError, match="SYS4"):
            leaves_from_records(paper_model, partial, paper_interviews)

    def test_duplicate_record_detected(self, paper_model, paper_questionnaires, paper_interviews):
        doubled = list(paper_questionnaires) + [paper_questionnaires[0]]
        with pytest.raises(DataError, match="duplicate"):
            leaves_from_records(paper_model, doubled, paper_interviews)
