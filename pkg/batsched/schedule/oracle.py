import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List

import networkx as nx
import numpy as np

from batsched.battery.model import BatteryParams, sigma_at_completion_batch
from batsched.constants import (
    ERROR_TOLERANCE,
    INT_DTYPE,
    ORACLE_BUDGET,
    ORACLE_MAX_DESIGN_POINTS,
    ORACLE_MAX_TASKS,
)
from batsched.exceptions import DeadlineInfeasibleError, OracleBudgetError
from batsched.graph.taskgraph import TaskGraph
from batsched.graph.validation import require_valid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    """Extremes of the battery cost over every feasible schedule."""

    best_sigma: float
    best_sequence: List[str]
    best_chosen: Dict[str, int]
    worst_sigma: float
    enumerated_count: int

    def to_dict(self) -> dict:
        return {
            "best_sigma_mA_min": float(self.best_sigma),
            "best_sequence": list(self.best_sequence),
            "best_chosen": [
                {"task": task_id, "design_point": int(self.best_chosen[task_id])}
                for task_id in self.best_sequence
            ],
            "worst_sigma_mA_min": float(self.worst_sigma),
            "enumerated_count": int(self.enumerated_count),
        }


def exhaustive_oracle(
    graph: TaskGraph,
    params: BatteryParams,
    max_tasks: int = ORACLE_MAX_TASKS,
    max_design_points: int = ORACLE_MAX_DESIGN_POINTS,
    budget: int = ORACLE_BUDGET,
) -> OracleResult:
    """Evaluates every topological order combined with every design point
    assignment that meets the deadline.

    Each configuration is costed at its own completion time. Only suitable
    for tiny graphs.

    Parameters
    ----------
    graph : TaskGraph
        Task graph
    params : BatteryParams
        Battery model constants
    max_tasks, max_design_points : int
        Largest graph accepted
    budget : int
        Largest number of (order, assignment) pairs accepted

    Raises
    ------
    OracleBudgetError
        When the graph exceeds the limits or the enumeration the budget
    DeadlineInfeasibleError
        When no assignment meets the deadline
    """
    require_valid(graph)
    n, m = graph.n_task, graph.n_design_point

    if n > max_tasks or m > max_design_points:
        raise OracleBudgetError(
            f"Graph with {n} tasks and {m} design points exceeds the oracle limits of "
            f"{max_tasks} tasks and {max_design_points} design points; use a smaller instance"
        )
    if m**n > budget:
        raise OracleBudgetError(
            f"{m}**{n} assignments exceed the oracle budget of {budget}; use a smaller instance"
        )

    orders = sorted(list(order) for order in nx.all_topological_sorts(graph.digraph))
    if len(orders) * m**n > budget:
        raise OracleBudgetError(
            f"{len(orders)} orders x {m ** n} assignments exceed the oracle budget of "
            f"{budget}; use a smaller instance"
        )

    duration = graph.duration.values
    current = graph.current.values
    rows = np.arange(n)

    assignments = np.array(list(itertools.product(range(m), repeat=n)), dtype=INT_DTYPE)
    totals = duration[rows, assignments].sum(axis=1)
    assignments = assignments[totals <= graph.deadline + ERROR_TOLERANCE]
    if assignments.shape[0] == 0:
        raise DeadlineInfeasibleError(
            f"The deadline cannot be met: no assignment finishes by {graph.deadline:g} min"
        )

    best_sigma, worst_sigma = np.inf, -np.inf
    best_sequence, best_columns = None, None

    for order in orders:
        perm = np.array([graph.index(task_id) for task_id in order], dtype=INT_DTYPE)
        columns = assignments[:, perm]
        sigmas = sigma_at_completion_batch(
            current[perm, columns], duration[perm, columns], params
        )

        k = int(np.argmin(sigmas))
        if sigmas[k] < best_sigma:
            best_sigma = float(sigmas[k])
            best_sequence = order
            best_columns = assignments[k]
        worst_sigma = max(worst_sigma, float(np.max(sigmas)))

    enumerated = len(orders) * assignments.shape[0]
    logger.debug("oracle enumerated %d configurations", enumerated)

    return OracleResult(
        best_sigma=best_sigma,
        best_sequence=best_sequence,
        best_chosen={
            task_id: int(best_columns[graph.index(task_id)]) + 1 for task_id in graph.task_ids
        },
        worst_sigma=worst_sigma,
        enumerated_count=enumerated,
    )
