from collections import Counter
from typing import List
from warnings import warn

import networkx as nx
import numpy as np

from batsched.constants import ERROR_TOLERANCE
from batsched.exceptions import InvalidGraphError


# validation helper functions
def _check_tasks(graph) -> List[str]:
    """Check the number of tasks, id uniqueness and the number of design
    points of every task."""
    violations = []

    if graph.n_task < 1:
        violations.append("graph has no tasks")
        return violations

    duplicates = sorted(task_id for task_id, count in Counter(graph.task_ids).items() if count > 1)
    if duplicates:
        violations.append(f"duplicate task ids: {', '.join(duplicates)}")

    counts = Counter(task.n_design_point for task in graph.tasks)
    if 0 in counts:
        empty = [task.id for task in graph.tasks if task.n_design_point == 0]
        violations.append(f"tasks without design points: {', '.join(empty)}")
    if len(counts) > 1:
        violations.append(
            "tasks do not share a common number of design points: "
            + ", ".join(f"{task.id}={task.n_design_point}" for task in graph.tasks)
        )

    return violations


def _check_design_points(graph) -> List[str]:
    """Check that every design point is positive and finite, durations are
    strictly ascending and currents strictly descending along each row."""
    violations = []

    for task in graph.tasks:
        if task.n_design_point == 0:
            continue

        current = np.array([dp.current for dp in task.design_points], dtype=np.float64)
        duration = np.array([dp.duration for dp in task.design_points], dtype=np.float64)
        voltage = np.array([dp.voltage for dp in task.design_points], dtype=np.float64)

        for name, values in (("current", current), ("duration", duration), ("voltage", voltage)):
            if not np.all(np.isfinite(values)) or np.any(values <= 0):
                violations.append(
                    f"task {task.id}: every design point {name} must be positive and finite, "
                    f"got {values.tolist()}"
                )

        if np.any(np.diff(duration) <= 0):
            violations.append(
                f"task {task.id}: durations must be strictly ascending, got {duration.tolist()}"
            )
        if np.any(np.diff(current) >= 0):
            violations.append(
                f"task {task.id}: currents must be strictly descending, got {current.tolist()}"
            )

    return violations


def _check_deadline(graph) -> List[str]:
    deadline = graph.deadline
    if not np.isfinite(deadline) or deadline <= 0:
        return [f"deadline must be positive and finite, got {deadline}"]
    return []


def _check_edges(graph) -> List[str]:
    """Check edge endpoints, self-loops, duplicates and acyclicity."""
    violations = []

    known = set(graph.task_ids)
    for parent, child in graph.edges:
        unknown = [task_id for task_id in (parent, child) if task_id not in known]
        if unknown:
            violations.append(
                f"edge {parent} -> {child} references unknown tasks: {', '.join(unknown)}"
            )
        if parent == child:
            violations.append(f"self-loop on task {parent}")

    duplicates = sorted(edge for edge, count in Counter(graph.edges).items() if count > 1)
    for parent, child in duplicates:
        violations.append(f"duplicate edge {parent} -> {child}")

    digraph = nx.DiGraph(graph.digraph)
    digraph.remove_edges_from(list(nx.selfloop_edges(digraph)))
    try:
        cycle = nx.find_cycle(digraph)
    except nx.NetworkXNoCycle:
        pass
    else:
        members = [parent for parent, _ in cycle] + [cycle[0][0]]
        violations.append(f"cycle: {' -> '.join(members)}")

    return violations


def validate(graph) -> List[str]:
    """Checks every structural invariant of a task graph.

    Parameters
    ----------
    graph : TaskGraph
        Graph to check

    Returns
    -------
    violations : list of str
        Description of every violated invariant, empty if the graph is valid

    Examples
    --------
    >>> import batsched as bs
    >>> bs.validate(bs.load_g3())
    []
    """
    violations = []
    violations += _check_tasks(graph)
    if graph.n_task == 0:
        return violations
    violations += _check_design_points(graph)
    violations += _check_deadline(graph)
    violations += _check_edges(graph)
    return violations


def require_valid(graph):
    """Raises ``InvalidGraphError`` listing every violation if ``graph`` is
    not valid, otherwise returns it unchanged."""
    violations = validate(graph)
    if violations:
        raise InvalidGraphError(violations)
    return graph


def check_energy_bracketing(graph) -> bool:
    """Check that the energy of every design point lies between the energy
    of the task's column m and column 1 design points.

    The energy ratio relies on this to stay within [0, 1]; graphs violating
    it are still accepted and the ratio is clamped.
    """
    energy = graph.energy.values
    lower = energy[:, -1:] - ERROR_TOLERANCE
    upper = energy[:, :1] + ERROR_TOLERANCE
    outside = np.any((energy < lower) | (energy > upper), axis=1)

    if np.any(outside):
        rows = [graph.task_ids[i] for i in np.flatnonzero(outside)]
        warn(
            "Design point energies of tasks {0} are not bracketed by their "
            "column m and column 1 energies; the energy ratio will be clamped".format(
                ", ".join(rows)
            ),
            RuntimeWarning,
        )
        return False
    return True
