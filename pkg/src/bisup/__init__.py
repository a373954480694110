"""Joint boundary-crossing probabilities for two drifted Brownian suprema.

Exact finite- and infinite-horizon values, deep-tail log-domain evaluation,
high-threshold and many-source decay asymptotics with regime classification,
bivariate normal tail forms, and an independent Monte Carlo oracle.
"""
from .errors import BisupError, CancellationError, NumericalIntegrityError, ValidationError
from .gauss import (
    LogProb,
    bvn_cdf,
    bvn_sf,
    log_bvn_sf,
    log_norm_sf,
    norm_pdf,
    norm_sf,
)
from .model import (
    CriticalTimes,
    ModelParams,
    NormalizedParams,
    critical_times,
    normalize,
    normalized,
    times_close,
)
from .exact import (
    ProbabilityResult,
    boundary_no_cross,
    bridge_no_cross,
    log_pi_joint,
    pi1d,
    pi_infinite,
    pi_joint,
)
from .asymptotics import (
    REGIME_LABELS,
    AsymptoticForm,
    BivariateTailResult,
    bvn_tail_asym,
    eval_asym,
    high_threshold,
    many_source_asym,
    many_source_classify,
)
from .montecarlo import SimConfig, SimEstimate, simulate_bridge_check, simulate_joint

__version__ = "0.1.0"

__all__ = [
    "BisupError", "ValidationError", "NumericalIntegrityError", "CancellationError",
    "LogProb", "norm_pdf", "norm_sf", "log_norm_sf", "bvn_cdf", "bvn_sf", "log_bvn_sf",
    "ModelParams", "NormalizedParams", "CriticalTimes",
    "normalize", "normalized", "critical_times", "times_close",
    "ProbabilityResult", "pi1d", "pi_joint", "pi_infinite", "log_pi_joint",
    "bridge_no_cross", "boundary_no_cross",
    "AsymptoticForm", "BivariateTailResult", "REGIME_LABELS",
    "eval_asym", "many_source_classify", "many_source_asym",
    "high_threshold", "bvn_tail_asym",
    "SimConfig", "SimEstimate", "simulate_joint", "simulate_bridge_check",
    "__version__",
]
