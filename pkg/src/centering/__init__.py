"""Centering-theory analysis of annotated discourse, with Italian subject statistics."""

from centering.corpus import (
    load_analysis,
    load_corpus,
    parse_corpus,
    segment_units,
    filter_mentions,
    serialize_analysis,
    serialize_discourse,
    validate,
)
from centering.engine import (
    AnalysisResult,
    Convention,
    ExpressionTag,
    FelicityKind,
    agreement_forces_referent,
    analyze_discourse,
    check_felicity,
    check_rule1,
    classify_sequence,
    classify_transition,
    coherence_score,
    compute_cb,
    detect_cent_est,
    resolve_pronouns,
)
from centering.model import (
    AnnotationError,
    CenteringUnit,
    Discourse,
    Entity,
    Form,
    GrammaticalFunction,
    Mention,
    SequenceLabel,
    Transition,
    rank_cf,
)
from centering.stats import chi_square, distribution_table, report, sequence_table

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "AnnotationError",
    "CenteringUnit",
    "Convention",
    "Discourse",
    "Entity",
    "ExpressionTag",
    "FelicityKind",
    "Form",
    "GrammaticalFunction",
    "Mention",
    "SequenceLabel",
    "Transition",
    "agreement_forces_referent",
    "analyze_discourse",
    "check_felicity",
    "check_rule1",
    "chi_square",
    "classify_sequence",
    "classify_transition",
    "coherence_score",
    "compute_cb",
    "detect_cent_est",
    "distribution_table",
    "filter_mentions",
    "load_analysis",
    "load_corpus",
    "parse_corpus",
    "rank_cf",
    "report",
    "resolve_pronouns",
    "segment_units",
    "sequence_table",
    "serialize_analysis",
    "serialize_discourse",
    "validate",
]
