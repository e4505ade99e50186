"""Figure rendering for terrasim trajectory and estimate CSV files."""
from .io import (ESTIMATE_FIXED_COLUMNS, TRAJECTORY_COLUMNS, SchemaError,
                 load_estimate, load_trajectory)
from .figures import (estimate_figure, forces_figure, trajectory_figure,
                      vertical_figure)

__all__ = [
    "ESTIMATE_FIXED_COLUMNS", "TRAJECTORY_COLUMNS", "SchemaError",
    "load_estimate", "load_trajectory", "estimate_figure", "forces_figure",
    "trajectory_figure", "vertical_figure",
]
