"""gDoF, optimal schedules and constant-gap bounds for half-duplex Gaussian relay networks."""
from .closedform2 import TwoRelayParams, classify_fd_regime, hd_gdof_n2, zeroable_state_n2
from .gdof import (
    CoefficientMatrix,
    GdofSolution,
    Schedule,
    build_coefficient_matrix,
    fd_gdof,
    gdof,
    minimum_support_solution,
    solve_gdof,
    solve_gdof_restricted,
)
from .mwbm import Matching, max_weight_matching
from .network import (
    ABSENT,
    ChannelInstance,
    ExponentMatrix,
    MaskedWeightMatrix,
    masked_submatrix,
    realize_channel,
)

__version__ = "0.1.0"
