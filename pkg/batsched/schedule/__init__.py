from .state import AssignmentState, ScoreBreakdown, TaskState, Window
from .sequencing import (
    baseline_sequence,
    is_topological_order,
    list_schedule,
    sequence_dec_energy,
    weighted_sequence,
)
from .allocation import (
    WindowLog,
    calculate_dpf,
    calculate_factors,
    choose_design_points,
    cif,
    current_ratio,
    dpf_formula,
    energy_ratio,
    evaluate_windows,
    slack_ratio,
)
from .driver import (
    IterationLog,
    ScheduleOptions,
    ScheduleResult,
    calculate_battery_cost,
    schedule,
    schedule_profile,
)
from .baseline import BaselineResult, baseline_schedule, min_energy_allocation
from .oracle import OracleResult, exhaustive_oracle
from .comparison import deadline_sweep


__all__ = (
    "AssignmentState",
    "ScoreBreakdown",
    "TaskState",
    "Window",
    "baseline_sequence",
    "is_topological_order",
    "list_schedule",
    "sequence_dec_energy",
    "weighted_sequence",
    "WindowLog",
    "calculate_dpf",
    "calculate_factors",
    "choose_design_points",
    "cif",
    "current_ratio",
    "dpf_formula",
    "energy_ratio",
    "evaluate_windows",
    "slack_ratio",
    "IterationLog",
    "ScheduleOptions",
    "ScheduleResult",
    "calculate_battery_cost",
    "schedule",
    "schedule_profile",
    "BaselineResult",
    "baseline_schedule",
    "min_energy_allocation",
    "OracleResult",
    "exhaustive_oracle",
    "deadline_sweep",
)
