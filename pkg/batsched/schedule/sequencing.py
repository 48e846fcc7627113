"""Weighted list scheduling of a task graph into a single sequence."""

import heapq
from typing import Dict, List, Mapping, Sequence

import numpy as np

from batsched.constants import DEFAULT_WEIGHT_MODE, WEIGHT_MODES
from batsched.exceptions import InvalidArgumentError
from batsched.graph.taskgraph import TaskGraph, descendants


def list_schedule(graph: TaskGraph, weight: Mapping[str, float]) -> List[str]:
    """Orders the tasks of ``graph`` by repeatedly taking the ready task with
    the largest weight.

    A task is ready once all of its parents have been scheduled. Ties are
    broken by ascending task id.

    Parameters
    ----------
    graph : TaskGraph
        Acyclic task graph
    weight : mapping of str to float
        Weight of every task

    Returns
    -------
    sequence : list of str
        Task ids in execution order, a topological order of ``graph``

    Examples
    --------
    Fork ``A -> {B, C}``:

    >>> list_schedule(fork, {"A": 0.0, "B": 1.0, "C": 2.0})
    ['A', 'C', 'B']
    """
    missing = [task_id for task_id in graph.task_ids if task_id not in weight]
    if missing:
        raise InvalidArgumentError(f"Missing weights for tasks {missing}")

    digraph = graph.digraph
    in_degree = {task_id: digraph.in_degree(task_id) for task_id in graph.task_ids}

    ready = [(-float(weight[v]), v) for v, deg in in_degree.items() if deg == 0]
    heapq.heapify(ready)

    sequence = []
    while ready:
        _, v = heapq.heappop(ready)
        sequence.append(v)
        for child in digraph.successors(v):
            in_degree[child] -= 1
            if in_degree[child] == 0:
                heapq.heappush(ready, (-float(weight[child]), child))

    if len(sequence) != graph.n_task:
        raise RuntimeError(
            "Ready list emptied before every task was scheduled; the graph contains a cycle"
        )

    return sequence


def sequence_dec_energy(graph: TaskGraph, weight_mode: str = DEFAULT_WEIGHT_MODE) -> List[str]:
    """Initial sequence: list scheduling with the mean design point current
    (``weight_mode="current"``) or mean energy (``"energy"``) of each task
    as its weight."""
    if weight_mode == "current":
        weight = graph.mean_current
    elif weight_mode == "energy":
        weight = graph.mean_energy
    else:
        raise InvalidArgumentError(
            f"weight_mode must be one of {WEIGHT_MODES}, got {weight_mode!r}"
        )
    return list_schedule(graph, weight)


def _check_currents(graph: TaskGraph, chosen_current: Mapping[str, float]):
    missing = [task_id for task_id in graph.task_ids if task_id not in chosen_current]
    if missing:
        raise InvalidArgumentError(f"Missing chosen currents for tasks {missing}")


def subgraph_current_weights(
    graph: TaskGraph, chosen_current: Mapping[str, float]
) -> Dict[str, float]:
    """Weight of each task as the total chosen current of the sub-graph
    rooted at it."""
    _check_currents(graph, chosen_current)
    return {
        v: float(np.sum([chosen_current[u] for u in sorted(descendants(graph, v))]))
        for v in graph.task_ids
    }


def weighted_sequence(graph: TaskGraph, chosen_current: Mapping[str, float]) -> List[str]:
    """Re-sequences ``graph`` with the weights of
    ``subgraph_current_weights``, so that tasks heading power hungry
    sub-graphs run first."""
    return list_schedule(graph, subgraph_current_weights(graph, chosen_current))


def baseline_weights(
    graph: TaskGraph, chosen_current: Mapping[str, float]
) -> Dict[str, float]:
    """Weight of each task as the larger of its own chosen current and the
    mean chosen current of the sub-graph rooted at it (itself included)."""
    _check_currents(graph, chosen_current)
    weights = {}
    for v in graph.task_ids:
        sub = sorted(descendants(graph, v))
        weights[v] = max(
            float(chosen_current[v]), float(np.mean([chosen_current[u] for u in sub]))
        )
    return weights


def baseline_sequence(graph: TaskGraph, chosen_current: Mapping[str, float]) -> List[str]:
    return list_schedule(graph, baseline_weights(graph, chosen_current))


def is_topological_order(graph: TaskGraph, sequence: Sequence[str]) -> bool:
    """Whether ``sequence`` holds every task exactly once with parents ahead
    of their children."""
    if len(sequence) != graph.n_task or set(sequence) != set(graph.task_ids):
        return False
    position = {task_id: i for i, task_id in enumerate(sequence)}
    return all(position[parent] < position[child] for parent, child in graph.edges)
