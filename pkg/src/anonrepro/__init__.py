"""Failure-trace anonymization with measurable bug reproducibility.

Anonymize recorded failure-inducing inputs with one of five privacy
techniques, regenerate concrete test inputs from the anonymized records,
and measure, against a corpus of real app bugs, how often the regenerated
inputs still trigger each failure and how often they leak the original.
"""
from . import corpus
from .errors import (
    AnonReproError,
    ConfigError,
    DegenerateIntervalError,
    DomainError,
    EnumerationInfeasibleError,
    EvaluationError,
    InvalidBaselineError,
    MissingHierarchyError,
    NonConformingValueError,
    OracleError,
    RuntimeFailure,
    TraceParseError,
    UnsupportedTechniqueError,
    ValidationError,
)
from .harness import (
    DEFAULT_CONFIDENCE,
    AggregateRow,
    TrialReport,
    VerificationResult,
    aggregate,
    attempts_for_confidence,
    run_entry,
    run_trials,
    verify_against_bruteforce,
)
from .model import (
    Categorical,
    CategoricalDomain,
    Continuous,
    DataValue,
    DomainSpec,
    Event,
    FailureTrace,
    NumericDomain,
    StringDomain,
    Text,
    TupleDomain,
    TupleValue,
    conforms,
    parse_trace,
    serialize_trace,
    values_equal,
)
from .oracles import (
    BugOracle,
    FiniteDistribution,
    evaluate,
    exhaustive_probability,
    technique_distribution,
)
from .rng import split, substream
from .techniques import (
    AnonymizedRecord,
    CategoryGroup,
    Concrete,
    GlobalRecodingConfig,
    IntervalGroup,
    LengthPolicy,
    LocalSuppressionConfig,
    NoiseAdditionConfig,
    RoundingConfig,
    SCDLocalSuppressionConfig,
    SpecialChars,
    Suppressed,
    TechniqueConfig,
    TupleRecord,
    anonymize,
    regenerate,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateRow",
    "AnonReproError",
    "AnonymizedRecord",
    "BugOracle",
    "Categorical",
    "CategoricalDomain",
    "CategoryGroup",
    "Concrete",
    "ConfigError",
    "Continuous",
    "DEFAULT_CONFIDENCE",
    "DataValue",
    "DegenerateIntervalError",
    "DomainError",
    "DomainSpec",
    "EnumerationInfeasibleError",
    "EvaluationError",
    "Event",
    "FailureTrace",
    "FiniteDistribution",
    "GlobalRecodingConfig",
    "IntervalGroup",
    "InvalidBaselineError",
    "LengthPolicy",
    "LocalSuppressionConfig",
    "MissingHierarchyError",
    "NoiseAdditionConfig",
    "NonConformingValueError",
    "NumericDomain",
    "OracleError",
    "RoundingConfig",
    "RuntimeFailure",
    "SCDLocalSuppressionConfig",
    "SpecialChars",
    "StringDomain",
    "Suppressed",
    "TechniqueConfig",
    "Text",
    "TraceParseError",
    "TrialReport",
    "TupleDomain",
    "TupleRecord",
    "TupleValue",
    "UnsupportedTechniqueError",
    "ValidationError",
    "VerificationResult",
    "aggregate",
    "anonymize",
    "attempts_for_confidence",
    "conforms",
    "corpus",
    "evaluate",
    "exhaustive_probability",
    "parse_trace",
    "regenerate",
    "run_entry",
    "run_trials",
    "serialize_trace",
    "split",
    "substream",
    "technique_distribution",
    "values_equal",
    "verify_against_bruteforce",
]
