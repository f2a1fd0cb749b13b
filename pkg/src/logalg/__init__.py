"""logalg: executable log-algebra theory.

Computes log F-norms of (matrix-valued) step functions via decreasing
rearrangements, decides inclusion and coincidence of log-algebras from
Radon-Nikodym boundedness, constructs the divergence counterexample with
numerical certificates, and decides isomorphism of commutative and
type-I_n log-algebras from Boolean-algebra passports.
"""

from .errors import (
    DocumentError,
    InputError,
    LogalgError,
    NumericError,
    NumericRangeError,
    UnsupportedMergeError,
)
from .isomorphism import (
    AlgebraDescriptor,
    Block,
    IsoVerdict,
    Obstruction,
    decide_center,
    decide_commutative,
    decide_direct_sum,
    decide_type_in,
    extension_exists,
)
from .measure import (
    AffineTail,
    Cardinal,
    CellModel,
    ClosedForm,
    Passport,
    PassportLine,
    RatioDecision,
    SeqSpec,
    Violation,
    closed_form_bounded,
    eval_closed_form,
    merge_passports,
    ratio_bounded,
    validate_passport,
)
from .rearrangement import (
    AxiomReport,
    MatrixStepFunction,
    RearrangementProfile,
    StepFunction,
    add_same_partition,
    check_axioms,
    log_norm,
    mul_same_partition,
    rearrange,
    rearrange_matrix,
    singular_values,
)
from .trace_comparison import (
    Counterexample,
    DivergenceCertificate,
    TracePair,
    build_counterexample,
    certify_divergence,
    decide_coincidence,
    decide_inclusion,
    essentially_bounded,
)

__version__ = "0.1.0"

__all__ = [
    "AffineTail",
    "AlgebraDescriptor",
    "AxiomReport",
    "Block",
    "Cardinal",
    "CellModel",
    "ClosedForm",
    "Counterexample",
    "DivergenceCertificate",
    "DocumentError",
    "InputError",
    "IsoVerdict",
    "LogalgError",
    "MatrixStepFunction",
    "NumericError",
    "NumericRangeError",
    "Obstruction",
    "Passport",
    "PassportLine",
    "RatioDecision",
    "RearrangementProfile",
    "SeqSpec",
    "StepFunction",
    "TracePair",
    "UnsupportedMergeError",
    "Violation",
    "add_same_partition",
    "build_counterexample",
    "certify_divergence",
    "check_axioms",
    "closed_form_bounded",
    "decide_center",
    "decide_coincidence",
    "decide_commutative",
    "decide_direct_sum",
    "decide_inclusion",
    "decide_type_in",
    "essentially_bounded",
    "eval_closed_form",
    "extension_exists",
    "log_norm",
    "merge_passports",
    "mul_same_partition",
    "ratio_bounded",
    "rearrange",
    "rearrange_matrix",
    "singular_values",
    "validate_passport",
]
