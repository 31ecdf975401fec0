"""Phase diagrams and ground states of multi-level atoms in multimode cavities."""

from ._core import (
    AtomicSystem,
    BudgetError,
    ConfigError,
    ConvergenceError,
    NotFoundError,
    candidates,
    excitation_weights,
    expectations,
    gradient,
    ground_state,
    lambda3,
    minimize,
    minimize_numeric,
    normal_boundary,
    reduced_energy,
    rwa_rescale,
    scan_grid,
    v3,
    xi3,
    xi4,
)

__all__ = [
    "AtomicSystem",
    "BudgetError",
    "ConfigError",
    "ConvergenceError",
    "NotFoundError",
    "candidates",
    "excitation_weights",
    "expectations",
    "gradient",
    "ground_state",
    "lambda3",
    "minimize",
    "minimize_numeric",
    "normal_boundary",
    "reduced_energy",
    "rwa_rescale",
    "scan_grid",
    "v3",
    "xi3",
    "xi4",
]
