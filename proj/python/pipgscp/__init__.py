"""Impulsive rendezvous trajectory optimization with SCP and PIPG."""

from ._core import (
    ConfigError,
    CwParams,
    GridKind,
    MonteCarloConfig,
    ProblemSpec,
    ScpConfig,
    SingularLinearizationError,
    SolverSettings,
    SubproblemWeights,
    __version__,
    load_config,
    monte_carlo,
    sample_initial_position,
    solve,
)

__all__ = [
    "ConfigError",
    "CwParams",
    "GridKind",
    "MonteCarloConfig",
    "ProblemSpec",
    "ScpConfig",
    "SingularLinearizationError",
    "SolverSettings",
    "SubproblemWeights",
    "__version__",
    "load_config",
    "monte_carlo",
    "sample_initial_position",
    "solve",
]
