from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ermcda.beliefs import (
    BeliefDistribution,
    distribution,
    expected_utility,
    from_counts,
    from_fractional_responses,
    from_mean,
)
from ermcda.errors import DistributionError, ScaleError
from ermcda.scales import make_scale
from strategies import belief_vectors

TWO_GRADE = make_scale("two", ["lo", "hi"], [0, 1])


class TestDistributionType:
    def test_ignorance_must_match(self):
        with pytest.raises(DistributionError, match="inconsistent"):
            BeliefDistribution("s", (0.5, 0.2), 0.1)

    def test_beliefs_cannot_exceed_one(self):
        with pytest.raises(DistributionError):
            BeliefDistribution("s", (0.8, 0.5), 0.0)

    def test_negative_belief_rejected(self):
        with pytest.raises(DistributionError):
            BeliefDistribution("s", (-0.1, 0.5), 0.6)


class TestFromCounts:
    def test_direct_ratio(self, questionnaire_scale):
        d = from_counts([0, 2, 1, 1, 0], 4, questionnaire_scale)
        assert d.beliefs == (0.0, 0.5, 0.25, 0.25, 0.0)
        assert d.ignorance == 0.0

    def test_nobody_answered_is_total_ignorance(self, questionnaire_scale):
        d = from_counts([0, 0, 0, 0, 0], 10, questionnaire_scale)
        assert d.beliefs == (0.0,) * 5
        assert d.ignorance == 1.0

    def test_missing_answers_become_ignorance(self, interview_scale):
        d = from_counts([3, 0, 0], 4, interview_scale)
        assert d.beliefs == (0.75, 0.0, 0.0)
        assert d.ignorance == 0.25

    def test_too_many_counts(self, interview_scale):
        with pytest.raises(DistributionError):
            from_counts([3, 2, 0], 4, interview_scale)

    def test_zero_responders(self, interview_scale):
        with pytest.raises(DistributionError):
            from_counts([0, 0, 0], 0, interview_scale)

    @given(
        counts=st.lists(st.integers(0, 40), min_size=3, max_size=3),
        extra=st.integers(0, 10),
    )
    def test_mass_always_sums_to_one(self, counts, extra, interview_scale):
        total = sum(counts) + extra
        if total == 0:
            return
        d = from_counts(counts, total, interview_scale)
        assert sum(d.beliefs) + d.ignorance == pytest.approx(1.0, abs=1e-12)


class TestFromFractionalResponses:
    def test_single_responder_spread(self, questionnaire_scale):
        d = from_fractional_responses([[0, 0, 0.5, 0.3, 0.2]], questionnaire_scale)
        assert d.beliefs == (0.0, 0.0, 0.5, 0.3, 0.2)
        assert d.ignorance == pytest.approx(0.0, abs=1e-12)

    def test_two_responders_average(self):
        d = from_fractional_responses([[1, 0], [0, 1]], TWO_GRADE)
        assert d.beliefs == (0.5, 0.5)

    def test_partial_response_contributes_ignorance(self):
        d = from_fractional_responses([[0.6, 0], [1.0, 0]], TWO_GRADE)
        assert d.beliefs == pytest.approx((0.8, 0.0))
        assert d.ignorance == pytest.approx(0.2)

    def test_empty_rejected(self):
        with pytest.raises(DistributionError, match="no responses"):
            from_fractional_responses([], TWO_GRADE)

    def test_oversized_response_rejected(self):
        with pytest.raises(DistributionError, match="sums to"):
            from_fractional_responses([[0.9, 0.2]], TWO_GRADE)


class TestFromMean:
    def test_interview_example(self, interview_scale):
        d = from_mean(2.25, interview_scale)
        assert d.beliefs == pytest.approx((0.0, 0.75, 0.25), abs=1e-12)
        assert d.ignorance == 0.0

    def test_integer_mean_hits_single_grade(self, interview_scale):
        assert from_mean(3.0, interview_scale).beliefs == (0.0, 0.0, 1.0)

    def test_low_mean_clamps_to_bottom(self, interview_scale):
        assert from_mean(0.90, interview_scale).beliefs == (1.0, 0.0, 0.0)

    def test_high_mean_clamps_to_top(self, interview_scale):
        assert from_mean(3.7, interview_scale).beliefs == (0.0, 0.0, 1.0)

    def test_fraction_splits_floor_and_ceiling(self, interview_scale):
        d = from_mean(1.65, interview_scale)
        assert d.beliefs == pytest.approx((0.35, 0.65, 0.0), abs=1e-12)

    def test_questionnaire_row(self, questionnaire_scale):
        d = from_mean(2.06977, questionnaire_scale)
        assert d.beliefs == pytest.approx((0.0, 0.93023, 0.06977, 0.0, 0.0), abs=1e-9)

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, bad, interview_scale):
        with pytest.raises(DistributionError):
            from_mean(bad, interview_scale)

    @given(mean=st.floats(1.0, 5.0, allow_nan=False))
    def test_grade_index_expectation_reproduces_mean(self, mean, questionnaire_scale):
        d = from_mean(mean, questionnaire_scale)
        recovered = sum(b * (i + 1) for i, b in enumerate(d.beliefs))
        assert recovered == pytest.approx(mean, abs=1e-9)

    @given(mean=st.floats(-3.0, 9.0, allow_nan=False))
    def test_at_most_two_adjacent_grades(self, mean, questionnaire_scale):
        d = from_mean(mean, questionnaire_scale)
        nonzero = [i for i, b in enumerate(d.beliefs) if b > 0]
        assert 1 <= len(nonzero) <= 2
        if len(nonzero) == 2:
            assert nonzero[1] - nonzero[0] == 1
        assert d.ignorance == 0.0


class TestExpectedUtility:
    def test_symmetric_distribution(self, common_scale):
        d = distribution("common5", [0.0, 0.25, 0.5, 0.25, 0.0])
        u = expected_utility(d, common_scale)
        assert u.mean_assigned == pytest.approx(0.5, abs=1e-12)
        assert u.min == u.max == u.mean_assigned

    def test_reference_root_distribution(self, common_scale):
        # frozen dot product with (0, .25, .5, .75, 1), computed by hand
        d = distribution("common5", [0.0979, 0.2340, 0.2123, 0.1201, 0.3357])
        u = expected_utility(d, common_scale)
        assert u.mean_assigned == pytest.approx(0.590425, abs=1e-9)

    def test_ignorance_bounds(self):
        d = BeliefDistribution("two", (0.5, 0.0), 0.5)
        u = expected_utility(d, TWO_GRADE)
        assert u.mean_assigned == 0.0
        assert u.min == 0.0
        assert u.max == 0.5

    def test_scale_mismatch(self, common_scale):
        d = distribution("other5", [1.0, 0, 0, 0, 0])
        with pytest.raises(ScaleError):
            expected_utility(d, common_scale)

    @given(vector=belief_vectors(5))
    def test_interval_collapses_iff_complete(self, vector, common_scale):
        d = distribution("common5", vector)
        u = expected_utility(d, common_scale)
        assert u.max - u.min == pytest.approx(d.ignorance, abs=1e-12)
        assert u.min <= u.mean_assigned <= u.max + 1e-12

    @given(vector=belief_vectors(5, complete=True), lo=st.integers(0, 3),
           shift=st.floats(0.0, 1.0))
    def test_shifting_mass_upward_never_decreases(self, vector, lo, shift, common_scale):
        moved = shift * vector[lo]
        shifted = list(vector)
        shifted[lo] -= moved
        shifted[lo + 1] += moved
        base = expected_utility(distribution("common5", vector), common_scale)
        bumped = expected_utility(distribution("common5", shifted), common_scale)
        assert bumped.mean_assigned >= base.mean_assigned - 1e-12
