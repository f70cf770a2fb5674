"""Spectral classification, resolvent checks and eigenvalue counting for direct sums of operators."""

__version__ = "0.1.0"

from .spectrum import (  # noqa: E402
    DEFAULT_TOLERANCE,
    ComplexPoint,
    InSpectrumError,
    SingularBlockError,
    SpecsumError,
    SpectralClass,
    SpectralComputationError,
    SupKind,
    SupResult,
    TailCertificationError,
    Tolerance,
    UnsupportedModelError,
)
from .models import (  # noqa: E402
    Circle,
    CoordinateOperator,
    DeclaredOperator,
    DiagonalOperator,
    Disk,
    ExplicitEntries,
    FiniteMatrixOperator,
    Growth,
    MultipointOperator,
    PowerLawEntries,
    ShiftOperator,
    VectorODEOperator,
    diagonal_resolvent_norm_exact,
    diagonal_resolvent_norm_hs_bound,
    matrix_classify,
    multipoint_eigenfunction_eval,
    multipoint_eigenvalue,
    ode_eigenvalue,
    ode_resolvent_bound,
    scalar,
)
from .family import (  # noqa: E402
    LIMIT_INFINITY,
    LIMIT_ZERO,
    UNKNOWN,
    Limit,
    LimitKind,
    OperatorFamily,
    TailRule,
    bounded_by,
)
from .classify import (  # noqa: E402
    DirectSumClassification,
    classify_direct_sum_point,
    resolvent_norm_sup,
    spectral_scan,
)
from .engine import (  # noqa: E402
    Boundedness,
    Compactness,
    Discreteness,
    assemble_resolvent_truncation,
    has_discrete_spectrum,
    is_bounded,
    is_compact,
    resolvent_tail_norm,
)
from .counting import (  # noqa: E402
    AsymptoticBoundSpec,
    AsymptoticFit,
    SeriesTail,
    counting_bound,
    counting_function,
    counting_table,
    fit_asymptotic_exponent,
    merged_counting,
    normalized_counting_bound,
    smallest_eigenvalues,
    verify_eigenvalue_bound,
)
from .oracle import TruncationReport, random_matrix_family, verify_family  # noqa: E402
from .config import FamilyConfig, build_family, dump_config, load_config  # noqa: E402
