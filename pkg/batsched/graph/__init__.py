from .taskgraph import (
    DesignPoint,
    Task,
    TaskGraph,
    current_extremes,
    descendants,
    energy_bounds,
    energy_order,
    mean_current,
    mean_energy,
)
from .validation import check_energy_bracketing, require_valid, validate
from .generators import fork_join_graph, random_task_graph, scaled_design_points


__all__ = (
    "DesignPoint",
    "Task",
    "TaskGraph",
    "current_extremes",
    "descendants",
    "energy_bounds",
    "energy_order",
    "mean_current",
    "mean_energy",
    "check_energy_bracketing",
    "require_valid",
    "validate",
    "fork_join_graph",
    "random_task_graph",
    "scaled_design_points",
)
