"""Python bindings for the deephedge C++ core."""

from ._core import (
    FEATURE_NAMES,
    HedgingEnv,
    IncompatibleError,
    NormStats,
    Panel,
    ProtocolError,
    ValidationError,
    block_bootstrap_ci,
    blend_stats,
    compute_gae,
    evaluate_checkpoint,
    max_drawdown,
    newey_west_se,
    sharpe,
    squashed_sample,
    step_cost,
    train,
)

__all__ = [
    "FEATURE_NAMES",
    "HedgingEnv",
    "IncompatibleError",
    "NormStats",
    "Panel",
    "ProtocolError",
    "ValidationError",
    "block_bootstrap_ci",
    "blend_stats",
    "compute_gae",
    "evaluate_checkpoint",
    "max_drawdown",
    "newey_west_se",
    "sharpe",
    "squashed_sample",
    "step_cost",
    "train",
]
