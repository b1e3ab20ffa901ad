"""Dual value iteration for a firm with defaultable debt."""

from ._core import (
    ConfigError,
    ConvergenceError,
    Solution,
    __version__,
    load,
    noncontraction_demo,
    set_jobs,
    simulate,
    solve,
    verify,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "Solution",
    "__version__",
    "load",
    "noncontraction_demo",
    "set_jobs",
    "simulate",
    "solve",
    "verify",
]
