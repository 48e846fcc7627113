from .core.api import (
    load_g3,
    load_g3_file,
    open_graph,
    open_graph_file,
    open_profile,
    write_graph_file,
    write_profile,
)

from .battery import (
    BatteryParams,
    DischargeProfile,
    estimate_lifetime,
    sigma,
    sigma_at_completion,
)
from .graph import (
    DesignPoint,
    Task,
    TaskGraph,
    current_extremes,
    descendants,
    energy_bounds,
    energy_order,
    fork_join_graph,
    mean_current,
    mean_energy,
    random_task_graph,
    scaled_design_points,
    validate,
)
from .io._json import GraphFile
from .schedule import (
    BaselineResult,
    OracleResult,
    ScheduleOptions,
    ScheduleResult,
    baseline_schedule,
    deadline_sweep,
    exhaustive_oracle,
    min_energy_allocation,
    schedule,
)

from .constants import INT_DTYPE


try:
    from importlib.metadata import version as _version
except Exception:
    from importlib_metadata import version as _version

try:
    __version__ = _version("batsched")
except Exception:
    # Placeholder version incase an error occurs, such as the library isn't installed
    __version__ = "999"

__all__ = (
    "load_g3",
    "load_g3_file",
    "open_graph",
    "open_graph_file",
    "open_profile",
    "write_graph_file",
    "write_profile",
    "BatteryParams",
    "DischargeProfile",
    "estimate_lifetime",
    "sigma",
    "sigma_at_completion",
    "DesignPoint",
    "Task",
    "TaskGraph",
    "current_extremes",
    "descendants",
    "energy_bounds",
    "energy_order",
    "fork_join_graph",
    "mean_current",
    "mean_energy",
    "random_task_graph",
    "scaled_design_points",
    "validate",
    "GraphFile",
    "BaselineResult",
    "OracleResult",
    "ScheduleOptions",
    "ScheduleResult",
    "baseline_schedule",
    "deadline_sweep",
    "exhaustive_oracle",
    "min_energy_allocation",
    "schedule",
    "INT_DTYPE",
)
