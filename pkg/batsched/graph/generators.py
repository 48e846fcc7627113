"""Synthetic task graphs.

Design points are derived from a column-1 (current, duration) pair by voltage
scaling: for a factor ``s`` relative to the column-1 voltage the duration
grows as ``1 / s`` and the current shrinks as ``s**3``.
"""

from typing import List, Optional, Sequence

import numpy as np

from batsched.constants import ERROR_TOLERANCE, G3_SCALING_FACTORS, TIME_QUANTUM
from batsched.exceptions import InvalidArgumentError
from batsched.graph.taskgraph import DesignPoint, Task, TaskGraph


def scaled_design_points(
    base_current: float,
    base_duration: float,
    factors: Sequence[float] = G3_SCALING_FACTORS,
    quantize: bool = False,
) -> List[DesignPoint]:
    """Builds voltage scaled design points from the column-1 operating
    point.

    Parameters
    ----------
    base_current : float
        Current of the column-1 design point (mA)
    base_duration : float
        Duration of the column-1 design point (minutes)
    factors : sequence of float
        Voltage scaling factors, strictly decreasing within (0, 1]
    quantize : bool, default=False
        Round currents to whole mA and durations to ``TIME_QUANTUM`` minutes,
        nudging values where rounding would break strict monotonicity

    Returns
    -------
    design_points : list of DesignPoint
        Column 1 first; ``voltage`` holds the scaling factor

    Examples
    --------
    >>> dps = scaled_design_points(917.0, 7.3, factors=(1.0, 0.5))
    >>> [(dp.current, dp.duration) for dp in dps]
    [(917.0, 7.3), (114.625, 14.6)]
    """
    factors = np.asarray(factors, dtype=np.float64)
    if factors.ndim != 1 or factors.size == 0:
        raise InvalidArgumentError("factors must be a non-empty sequence")
    if np.any(factors <= 0) or np.any(factors > 1):
        raise InvalidArgumentError(f"factors must lie in (0, 1], got {factors.tolist()}")
    if np.any(np.diff(factors) >= 0):
        raise InvalidArgumentError(
            f"factors must be strictly decreasing, got {factors.tolist()}"
        )
    if base_current <= 0 or base_duration <= 0:
        raise InvalidArgumentError("base_current and base_duration must be positive")

    currents = base_current * factors**3
    durations = base_duration / factors

    if quantize:
        currents = np.round(currents)
        durations = np.round(durations / TIME_QUANTUM) * TIME_QUANTUM
        for j in range(1, factors.size):
            if currents[j] >= currents[j - 1]:
                currents[j] = currents[j - 1] - 1
            if durations[j] <= durations[j - 1] + ERROR_TOLERANCE:
                durations[j] = durations[j - 1] + TIME_QUANTUM
        if currents[-1] < 1:
            raise InvalidArgumentError(
                f"base_current {base_current} is too small to quantize {factors.size} "
                "design points to whole mA"
            )
        durations = np.round(durations, 1)

    return [
        DesignPoint(float(c), float(d), float(s))
        for c, d, s in zip(currents, durations, factors)
    ]


def _feasible_deadline(tasks: Sequence[Task], slack: float) -> float:
    """Deadline between the smallest one every window scan can satisfy and
    the all-column-m completion time, rounded up to ``TIME_QUANTUM``."""
    fastest = np.array([t.design_points[0].duration for t in tasks])
    slowest = np.array([t.design_points[-1].duration for t in tasks])

    lower = fastest.sum() + np.max(slowest - fastest)
    upper = slowest.sum()
    deadline = max(lower, fastest.sum() + slack * (upper - fastest.sum()))
    return float(np.ceil(deadline / TIME_QUANTUM - ERROR_TOLERANCE) * TIME_QUANTUM)


def _random_tasks(rng, task_ids, factors) -> List[Task]:
    tasks = []
    for task_id in task_ids:
        base_current = float(rng.integers(300, 1000))
        base_duration = float(np.round(rng.uniform(3.0, 12.0), 1))
        tasks.append(
            Task(task_id, scaled_design_points(base_current, base_duration, factors, quantize=True))
        )
    return tasks


def _factors(n_design_point: int) -> np.ndarray:
    if n_design_point < 1:
        raise InvalidArgumentError(f"n_design_point must be >= 1, got {n_design_point}")
    if n_design_point == len(G3_SCALING_FACTORS):
        return np.asarray(G3_SCALING_FACTORS)
    return np.linspace(1.0, G3_SCALING_FACTORS[-1], n_design_point)


def random_task_graph(
    n_task: int,
    n_design_point: int,
    seed: Optional[int] = None,
    edge_probability: float = 0.3,
    slack: Optional[float] = None,
) -> TaskGraph:
    """Random DAG with voltage scaled design points.

    Edges ``Ti -> Tj`` are drawn independently for ``i < j``, so the graph is
    acyclic by construction. The deadline always admits the full window
    (column 1 for every task but the last, which sits at column m).

    Parameters
    ----------
    n_task : int
        Number of tasks, named ``T1 .. Tn``
    n_design_point : int
        Number of design points per task
    seed : int, optional
        Seed of ``numpy.random.default_rng``
    edge_probability : float, default=0.3
        Probability of each forward edge
    slack : float, optional
        Position of the deadline between the all-column-1 and all-column-m
        completion times, drawn uniformly when not given
    """
    if n_task < 1:
        raise InvalidArgumentError(f"n_task must be >= 1, got {n_task}")
    if not 0.0 <= edge_probability <= 1.0:
        raise InvalidArgumentError(
            f"edge_probability must lie in [0, 1], got {edge_probability}"
        )

    rng = np.random.default_rng(seed)
    factors = _factors(n_design_point)
    task_ids = [f"T{i + 1}" for i in range(n_task)]

    tasks = _random_tasks(rng, task_ids, factors)

    edges = []
    for i in range(n_task):
        for j in range(i + 1, n_task):
            if rng.random() < edge_probability:
                edges.append((task_ids[i], task_ids[j]))

    if slack is None:
        slack = float(rng.uniform(0.0, 1.0))

    return TaskGraph(tasks, edges=edges, deadline=_feasible_deadline(tasks, slack))


def fork_join_graph(
    n_stage: int = 2,
    width: int = 3,
    n_design_point: int = 5,
    seed: Optional[int] = None,
    slack: float = 0.5,
) -> TaskGraph:
    """Fork-join task graph.

    A source task forks into ``width`` parallel tasks that join into a single
    task; the pattern repeats ``n_stage`` times, each join acting as the next
    fork. The graph has ``1 + n_stage * (width + 1)`` tasks.

    Examples
    --------
    >>> graph = fork_join_graph(n_stage=1, width=2, seed=0)
    >>> graph.task_ids
    ['T1', 'T2', 'T3', 'T4']
    >>> sorted(graph.edges)
    [('T1', 'T2'), ('T1', 'T3'), ('T2', 'T4'), ('T3', 'T4')]
    """
    if n_stage < 1 or width < 1:
        raise InvalidArgumentError("n_stage and width must be >= 1")

    rng = np.random.default_rng(seed)
    factors = _factors(n_design_point)

    n_task = 1 + n_stage * (width + 1)
    task_ids = [f"T{i + 1}" for i in range(n_task)]
    tasks = _random_tasks(rng, task_ids, factors)

    edges = []
    fork = 0
    for _ in range(n_stage):
        branches = list(range(fork + 1, fork + 1 + width))
        join = fork + width + 1
        for b in branches:
            edges.append((task_ids[fork], task_ids[b]))
            edges.append((task_ids[b], task_ids[join]))
        fork = join

    return TaskGraph(tasks, edges=edges, deadline=_feasible_deadline(tasks, slack))
