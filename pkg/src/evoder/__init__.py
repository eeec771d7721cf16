"""Exact derivation algebras of evolution algebras over the Gaussian rationals."""

from .algebra import BVector, EvolutionAlgebra, multiply, normalize_dependent_row, rank
from .classifier import (
    ClassificationResult,
    ClosedFormFamily,
    Tag,
    VerificationReport,
    classify,
    delta_candidates,
    emit_closed_forms,
    verify_closed_forms,
)
from .derivations import (
    DerivationSpace,
    FloatCheckReport,
    LeibnizSystem,
    apply,
    assemble,
    derivations,
    float_check,
    is_derivation,
    lie_bracket,
    nullspace,
)
from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    EmptyMatrix,
    EvoderError,
    ExplicitLimit,
    MalformedScalar,
    NonSquare,
    ParseError,
    PatternMismatch,
    RadicandMismatch,
    RankMismatch,
    UnsupportedCase,
)
from .field import I, ONE, ZERO, GaussianRational, QuadExtScalar, format_scalar, parse_scalar
from .generate import GeneratedInstance, gen_instance, generate
from .io import BatchResult, Report, parse_matrix_file, run_batch, serialize_matrix

__version__ = "0.1.0"
