from typing import Mapping, Sequence, Tuple, Union

import numpy as np

from batsched.battery.model import BatteryParams, DischargeProfile, sigma_at_completion
from batsched.exceptions import InvalidArgumentError
from batsched.graph.taskgraph import TaskGraph
from batsched.schedule.state import AssignmentState


def _chosen_columns(graph: TaskGraph, chosen) -> Mapping[str, int]:
    if isinstance(chosen, AssignmentState):
        chosen = chosen.chosen

    m = graph.n_design_point
    missing = [task_id for task_id in graph.task_ids if task_id not in chosen]
    if missing:
        raise InvalidArgumentError(f"No design point chosen for tasks {missing}")
    for task_id, column in chosen.items():
        if not 1 <= column <= m:
            raise InvalidArgumentError(
                f"Design point column of task {task_id} must lie in [1, {m}], got {column}"
            )
    return chosen


def schedule_profile(
    graph: TaskGraph, sequence: Sequence[str], chosen
) -> DischargeProfile:
    """Discharge profile of running ``sequence`` back-to-back from t = 0,
    each task at its chosen design point.

    Parameters
    ----------
    graph : TaskGraph
        Task graph
    sequence : sequence of str
        Execution order
    chosen : mapping of str to int or AssignmentState
        1-based design point column of every task
    """
    chosen = _chosen_columns(graph, chosen)

    rows = np.array([graph.index(task_id) for task_id in sequence], dtype=np.intp)
    cols = np.array([chosen[task_id] - 1 for task_id in sequence], dtype=np.intp)

    return DischargeProfile(
        graph.current.values[rows, cols], graph.duration.values[rows, cols]
    )


def calculate_battery_cost(
    graph: TaskGraph,
    sequence: Sequence[str],
    chosen: Union[Mapping[str, int], AssignmentState],
    params: BatteryParams,
) -> Tuple[float, float]:
    """Battery cost of a schedule.

    Returns
    -------
    sigma : float
        Charge lost when the last task completes (mA min)
    delta : float
        Completion time of the schedule (minutes)
    """
    return sigma_at_completion(schedule_profile(graph, sequence, chosen), params)
