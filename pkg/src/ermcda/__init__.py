"""Multi-criteria evidential reasoning over an attribute hierarchy.

Aggregates assessments from heterogeneous sources (multi-grade
questionnaires, coarser interviews) into a common belief framework, combines
them with weighted Dempster-style evidence combination, and ranks
alternatives by expected utility.
"""

from ermcda.beliefs import (
    BeliefDistribution,
    UtilityInterval,
    expected_utility,
    from_counts,
    from_fractional_responses,
    from_mean,
)
from ermcda.engine import (
    MassAssignment,
    RankedAlternative,
    combine,
    evaluate,
    rank,
    to_masses,
)
from ermcda.errors import ErmcdaError
from ermcda.hierarchy import (
    Attribute,
    AttributeTree,
    set_top_level_split,
    validate,
    weights_from_frequencies,
)
from ermcda.ingest import (
    InterviewRecord,
    Model,
    QuestionnaireRecord,
    interview_frequency_to_mean,
    leaves_from_records,
    load_interview_csv,
    load_model,
    load_questionnaire_csv,
)
from ermcda.scales import (
    GradeScale,
    ScaleTransform,
    apply_transform,
    interview_to_common,
    make_scale,
    questionnaire_to_common,
    transform_from_anchor_rules,
)

__version__ = "0.1.0"

__all__ = [
    "Attribute",
    "AttributeTree",
    "BeliefDistribution",
    "ErmcdaError",
    "GradeScale",
    "InterviewRecord",
    "MassAssignment",
    "Model",
    "QuestionnaireRecord",
    "RankedAlternative",
    "ScaleTransform",
    "UtilityInterval",
    "apply_transform",
    "combine",
    "evaluate",
    "expected_utility",
    "from_counts",
    "from_fractional_responses",
    "from_mean",
    "interview_frequency_to_mean",
    "interview_to_common",
    "leaves_from_records",
    "load_interview_csv",
    "load_model",
    "load_questionnaire_csv",
    "make_scale",
    "questionnaire_to_common",
    "rank",
    "set_top_level_split",
    "to_masses",
    "transform_from_anchor_rules",
    "validate",
    "weights_from_frequencies",
    "__version__",
]
