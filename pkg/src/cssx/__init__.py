"""Exactly-k column subset selection by leverage sampling plus strong RRQR."""

from .cssp import (
    CsspConfig,
    CsspResult,
    boost,
    frobenius_bound_factor,
    spectral_bound,
    two_stage_select,
)
from .estimator import ColumnSubsetSelector
from .exceptions import (
    AllTrialsFailedError,
    BudgetExceededError,
    CsspError,
    InvalidSelectionError,
    NonFiniteError,
    NonTerminationError,
    ParseError,
    RankDeficientError,
    SampleRankLossError,
    ZeroMatrixError,
)
from .io import read_matrix
from .linalg import (
    SvdFactors,
    best_rank_k_residual,
    frobenius_norm,
    projection_residual,
    pseudoinverse,
    spectral_norm,
    svd,
)
from .oracle import OracleResult, exhaustive_best, pivoted_qr_baseline, uniform_baseline
from .rrqr import RrqrSelection, strong_rrqr_select
from .sampling import (
    CMode,
    ColumnSample,
    ProbabilityVector,
    apply_sample,
    choose_c,
    hybrid_probabilities,
    leverage_probabilities,
    sample_exactly_c,
)

__version__ = "0.1.0"
