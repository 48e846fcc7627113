"""Minimum energy allocation with subgraph-mean sequencing, the reference
method the battery-aware schedule is compared against."""

import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from batsched.battery.model import BatteryParams
from batsched.constants import ERROR_TOLERANCE, TIME_QUANTUM
from batsched.exceptions import DeadlineInfeasibleError
from batsched.graph.taskgraph import TaskGraph
from batsched.graph.validation import require_valid
from batsched.schedule.cost import calculate_battery_cost
from batsched.schedule.sequencing import baseline_sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaselineResult:
    chosen: Dict[str, int]
    sequence: List[str]
    sigma: float
    delta: float
    total_energy: float
    deadline: float

    def to_dict(self) -> dict:
        return {
            "sequence": list(self.sequence),
            "chosen": [
                {"task": task_id, "design_point": int(self.chosen[task_id])}
                for task_id in self.sequence
            ],
            "sigma_mA_min": float(self.sigma),
            "delta_min": float(self.delta),
            "total_energy_mA_min": float(self.total_energy),
            "deadline_min": float(self.deadline),
        }


def _quantize(durations: np.ndarray) -> np.ndarray:
    return np.ceil(durations / TIME_QUANTUM - ERROR_TOLERANCE).astype(np.int64)


def min_energy_allocation(graph: TaskGraph, d: float) -> Dict[str, int]:
    """Design point of every task minimizing total energy subject to the
    total duration meeting ``d``.

    Solved exactly as a multiple-choice knapsack by dynamic programming over
    time in steps of ``TIME_QUANTUM`` minutes. Among optimal allocations the
    lexicographically largest column vector in task id order is returned.

    Parameters
    ----------
    graph : TaskGraph
        Task graph
    d : float
        Deadline (minutes)

    Returns
    -------
    chosen : dict of str to int
        1-based design point column of every task

    Raises
    ------
    DeadlineInfeasibleError
        When the all-column-1 completion time exceeds ``d``
    """
    task_ids = sorted(graph.task_ids)
    rows = [graph.index(task_id) for task_id in task_ids]

    units = _quantize(graph.duration.values[rows])
    energy = graph.energy.values[rows]
    n, m = units.shape

    capacity = int(np.floor(d / TIME_QUANTUM + ERROR_TOLERANCE))
    if units[:, 0].sum() > capacity:
        raise DeadlineInfeasibleError(
            f"The deadline cannot be met: {d:g} min is shorter than the "
            f"all-fastest completion time {graph.duration.values[:, 0].sum():g} min"
        )
    # more capacity than the all-slowest schedule needs changes nothing
    capacity = min(capacity, int(units[:, -1].sum()))

    # best[i, c]: least energy of tasks i.. within c time units
    best = np.full((n + 1, capacity + 1), np.inf)
    best[n, :] = 0.0
    for i in range(n - 1, -1, -1):
        for j in range(m):
            q = units[i, j]
            if q > capacity:
                continue
            candidate = energy[i, j] + best[i + 1, : capacity + 1 - q]
            np.minimum(best[i, q:], candidate, out=best[i, q:])

    chosen = {}
    c = capacity
    for i in range(n):
        target = best[i, c]
        for j in range(m - 1, -1, -1):
            q = units[i, j]
            if q > c:
                continue
            value = energy[i, j] + best[i + 1, c - q]
            if value <= target + ERROR_TOLERANCE * max(1.0, abs(target)):
                chosen[task_ids[i]] = j + 1
                c -= q
                break

    logger.debug("minimum energy %.6g mA min within %g min", best[0, capacity], d)
    return {task_id: chosen[task_id] for task_id in graph.task_ids}


def baseline_schedule(graph: TaskGraph, params: BatteryParams) -> BaselineResult:
    """Minimum energy allocation for the graph deadline, sequenced by the
    larger of each task's current and the mean current of the sub-graph it
    heads."""
    require_valid(graph)

    chosen = min_energy_allocation(graph, graph.deadline)
    chosen_current = {
        task_id: float(graph.current.values[graph.index(task_id), column - 1])
        for task_id, column in chosen.items()
    }
    sequence = baseline_sequence(graph, chosen_current)
    sigma, delta = calculate_battery_cost(graph, sequence, chosen, params)

    energy = graph.energy.values
    total_energy = float(
        np.sum([energy[graph.index(task_id), column - 1] for task_id, column in chosen.items()])
    )

    return BaselineResult(
        chosen=chosen,
        sequence=sequence,
        sigma=sigma,
        delta=delta,
        total_energy=total_energy,
        deadline=graph.deadline,
    )
