"""Fuzzy decision support for student behavioral referrals."""

__version__ = "0.1.0"

from .core import (
    AggregatedOutput,
    ClassificationBand,
    Diagnostic,
    InferenceResult,
    LinguisticVariable,
    MembershipFunction,
    Model,
    ModelConsistencyError,
    OutOfUniverseError,
    Rule,
    Shape,
    Term,
    aggregate,
    classify_output,
    defuzzify_centroid,
    eval_mf,
    firing_strength,
    fuzzify,
    infer,
    shoulder_left,
    shoulder_right,
    triangle,
    validate_model,
)
from .dsl import (
    ModelFormatError,
    ModelSource,
    ParseError,
    builtin_student_model,
    load_model_file,
    parse_model,
    serialize_model,
)
from .reporting import (
    FrequencyReport,
    SurfaceGrid,
    batch_infer,
    frequency_report,
    surface_grid,
)
from .store import ReferralRecord, ReferralStore, parse_referral_csv

__all__ = [
    "AggregatedOutput",
    "ClassificationBand",
    "Diagnostic",
    "FrequencyReport",
    "InferenceResult",
    "LinguisticVariable",
    "MembershipFunction",
    "Model",
    "ModelConsistencyError",
    "ModelFormatError",
    "ModelSource",
    "OutOfUniverseError",
    "ParseError",
    "ReferralRecord",
    "ReferralStore",
    "Rule",
    "Shape",
    "SurfaceGrid",
    "Term",
    "aggregate",
    "batch_infer",
    "builtin_student_model",
    "classify_output",
    "defuzzify_centroid",
    "eval_mf",
    "firing_strength",
    "frequency_report",
    "fuzzify",
    "infer",
    "load_model_file",
    "parse_model",
    "parse_referral_csv",
    "serialize_model",
    "shoulder_left",
    "shoulder_right",
    "surface_grid",
    "triangle",
    "validate_model",
]
