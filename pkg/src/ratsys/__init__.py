"""Closed forms and classification for a planar rational system.

The system is

    x[n+1] = a[n]/x[n] + b[n]/y[n]
    y[n+1] = c[n]/x[n] + d[n]/y[n]

with positive two-periodic coefficients and positive initial values.
A multiplicative change of variables turns it into a linear recurrence
driven by a positive 2x2 matrix; the rank of the composed two-step
matrix splits the analysis into a geometric (rank-1) branch and a
spectral (rank-2) branch, and every orbit either blows up along one
parity class while vanishing along the other, or approaches a positive
two-cycle.
"""

from .analysis import (
    ComparisonReport,
    PeriodReport,
    PeriodStatus,
    ProductReport,
    ProductStatus,
    classify,
    compare,
    detect_period,
    product_converges,
)
from .classification import Classification, Kind
from .core import (
    Orbit,
    OrbitPoint,
    PeriodicCoefficients,
    log_simulate,
    simulate,
    step,
)
from .errors import (
    BitGrowthError,
    BranchError,
    ConvergenceError,
    DomainError,
    RatsysError,
    TruncationError,
)
from .numeric import ArithmeticMode, Number, format_number, parse_number
from .rank1 import (
    Rank1Data,
    classify_rank1,
    growth_and_ratio,
    k_constant,
    rank1_solution,
    rank1_uv,
)
from .rank2 import (
    LimitCycle,
    Rank2Witness,
    SignedLog,
    SpectralData,
    classify_rank2,
    criterion_delta,
    delta_sign_exact,
    eigenvalues,
    limit_cycle,
    rank2_solution,
    rank2_solution_sequence,
    rank2_uv,
    spectral_constants,
)
from .transfer import (
    Parity,
    TransferMatrix,
    UVPoint,
    composed_matrix,
    linear_step,
    parity_matrix,
    rank_decision,
    uv_from_orbit,
)

__all__ = [
    "ArithmeticMode",
    "BitGrowthError",
    "BranchError",
    "Classification",
    "ComparisonReport",
    "ConvergenceError",
    "DomainError",
    "Kind",
    "LimitCycle",
    "Number",
    "Orbit",
    "OrbitPoint",
    "Parity",
    "PeriodReport",
    "PeriodStatus",
    "PeriodicCoefficients",
    "ProductReport",
    "ProductStatus",
    "Rank1Data",
    "Rank2Witness",
    "RatsysError",
    "SignedLog",
    "SpectralData",
    "TransferMatrix",
    "TruncationError",
    "UVPoint",
    "classify",
    "classify_rank1",
    "classify_rank2",
    "compare",
    "composed_matrix",
    "criterion_delta",
    "delta_sign_exact",
    "detect_period",
    "eigenvalues",
    "format_number",
    "growth_and_ratio",
    "k_constant",
    "limit_cycle",
    "linear_step",
    "log_simulate",
    "parity_matrix",
    "parse_number",
    "product_converges",
    "rank1_solution",
    "rank1_uv",
    "rank2_solution",
    "rank2_solution_sequence",
    "rank2_uv",
    "rank_decision",
    "simulate",
    "spectral_constants",
    "step",
    "uv_from_orbit",
]

__version__ = "0.1.0"
