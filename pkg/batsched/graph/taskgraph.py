"""batsched.graph.taskgraph module."""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
import xarray as xr

import batsched.conventions.taskgraph as tgc
from batsched.exceptions import InvalidArgumentError, InvalidGraphError


@dataclass(frozen=True)
class DesignPoint:
    """One implementation option of a task.

    Parameters
    ----------
    current : float
        Average total platform current while the task runs (mA)
    duration : float
        Execution time (minutes)
    voltage : float, default=1.0
        Supply voltage relative to the energy unit; energies are
        ``current * voltage * duration``
    """

    current: float
    duration: float
    voltage: float = 1.0

    @property
    def energy(self) -> float:
        return self.current * self.voltage * self.duration


@dataclass(frozen=True)
class Task:
    """A node of the task graph together with its design points, ordered
    from the fastest, highest powered (column 1) to the slowest, lowest
    powered (column m)."""

    id: str
    design_points: Tuple[DesignPoint, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "design_points", tuple(self.design_points))

    @property
    def n_design_point(self) -> int:
        return len(self.design_points)


def mean_current(task: Task) -> float:
    """Arithmetic mean of the currents of all design points of ``task``
    (mA)."""
    return float(np.mean([dp.current for dp in task.design_points]))


def mean_energy(task: Task) -> float:
    """Arithmetic mean of the energies of all design points of ``task``
    (mA min)."""
    return float(np.mean([dp.energy for dp in task.design_points]))


class TaskGraph:
    """Directed acyclic task graph with per-task design points and a
    completion deadline.

    The execution time and current matrices (``D`` and ``I``, one row per
    task, one column per design point) are stored in an internal
    ``xarray.Dataset`` and exposed through the ``duration``, ``current`` and
    ``voltage`` attributes. Precedence edges are held in a
    ``networkx.DiGraph``.

    A ``TaskGraph`` can be constructed from invalid data so that
    ``batsched.graph.validate`` can report every problem; operations that need
    a valid graph call ``require_valid`` first.

    Parameters
    ----------
    tasks : iterable of Task
        Tasks in row order
    edges : iterable of (str, str)
        Precedence edges as ``(parent id, child id)`` pairs
    deadline : float
        Completion deadline of the whole graph (minutes)

    Examples
    --------
    >>> import batsched as bs
    >>> a = bs.Task("A", [bs.DesignPoint(100.0, 1.0), bs.DesignPoint(20.0, 2.0)])
    >>> b = bs.Task("B", [bs.DesignPoint(80.0, 2.0), bs.DesignPoint(10.0, 5.0)])
    >>> graph = bs.TaskGraph([a, b], edges=[("A", "B")], deadline=6.0)
    >>> graph.descendants("A")
    {'A', 'B'}
    """

    def __init__(
        self,
        tasks: Iterable[Task],
        edges: Iterable[Tuple[str, str]] = (),
        deadline: float = np.inf,
    ):
        self._tasks = tuple(tasks)
        self._edges = tuple((str(parent), str(child)) for parent, child in edges)
        self._deadline = float(deadline)

        self._index = {task.id: i for i, task in enumerate(self._tasks)}

        # initialize cached data structures
        self._ds = None
        self._digraph = None
        self._descendants = {}

    @classmethod
    def from_matrices(
        cls,
        task_ids: Sequence[str],
        currents,
        durations,
        edges: Iterable[Tuple[str, str]] = (),
        deadline: float = np.inf,
        voltages=None,
        labels: Optional[Sequence[str]] = None,
    ):
        """Constructs a ``TaskGraph`` from ``(n_task, n_design_point)``
        current and duration matrices.

        Parameters
        ----------
        task_ids : sequence of str
            One identifier per matrix row
        currents, durations : array_like
            Design point matrices ``I`` and ``D``, column 1 first
        voltages : array_like, optional
            Relative voltages, defaults to ones
        labels : sequence of str, optional
            Free text label of each task
        """
        currents = np.asarray(currents, dtype=np.float64)
        durations = np.asarray(durations, dtype=np.float64)
        if voltages is None:
            voltages = np.ones_like(currents)
        voltages = np.asarray(voltages, dtype=np.float64)

        if currents.ndim != 2 or currents.shape != durations.shape or currents.shape != voltages.shape:
            raise InvalidArgumentError(
                "currents, durations and voltages must be 2D arrays of the same shape"
            )
        if len(task_ids) != currents.shape[0]:
            raise InvalidArgumentError(
                f"Expected {currents.shape[0]} task ids, got {len(task_ids)}"
            )
        if labels is None:
            labels = [""] * len(task_ids)

        tasks = [
            Task(
                task_id,
                [
                    DesignPoint(float(c), float(d), float(v))
                    for c, d, v in zip(currents[i], durations[i], voltages[i])
                ],
                label=labels[i],
            )
            for i, task_id in enumerate(task_ids)
        ]
        return cls(tasks, edges=edges, deadline=deadline)

    # ------------------------------------------------------------------ #
    # basic attributes
    # ------------------------------------------------------------------ #
    @property
    def tasks(self) -> Tuple[Task, ...]:
        return self._tasks

    @property
    def task_ids(self) -> List[str]:
        """Task identifiers in row order."""
        return [task.id for task in self._tasks]

    @property
    def edges(self) -> Tuple[Tuple[str, str], ...]:
        """Precedence edges as ``(parent, child)`` pairs."""
        return self._edges

    @property
    def deadline(self) -> float:
        """Completion deadline (minutes)."""
        return self._deadline

    @property
    def n_task(self) -> int:
        return len(self._tasks)

    @property
    def n_edge(self) -> int:
        return len(self._edges)

    @property
    def n_design_point(self) -> int:
        """Number of design points per task (``m``)."""
        counts = {task.n_design_point for task in self._tasks}
        if len(counts) != 1:
            raise InvalidGraphError(
                [f"tasks do not share a common number of design points: {sorted(counts)}"]
            )
        return counts.pop()

    def task(self, task_id: str) -> Task:
        return self._tasks[self.index(task_id)]

    def index(self, task_id: str) -> int:
        """Row of ``task_id`` in the design point matrices."""
        try:
            return self._index[task_id]
        except KeyError:
            raise InvalidArgumentError(f"Unknown task id {task_id!r}") from None

    def __contains__(self, task_id) -> bool:
        return task_id in self._index

    def __len__(self):
        return self.n_task

    def __eq__(self, other):
        if not isinstance(other, TaskGraph):
            return NotImplemented
        return (
            self._tasks == other._tasks
            and set(self._edges) == set(other._edges)
            and self._deadline == other._deadline
        )

    def __repr__(self):
        return (
            f"<batsched.TaskGraph>\n"
            f"  n_task: {self.n_task}\n"
            f"  n_edge: {self.n_edge}\n"
            f"  n_design_point: "
            f"{sorted({t.n_design_point for t in self._tasks})}\n"
            f"  deadline: {self._deadline:g} min"
        )

    # ------------------------------------------------------------------ #
    # structure
    # ------------------------------------------------------------------ #
    @property
    def digraph(self) -> nx.DiGraph:
        """``networkx.DiGraph`` of the precedence edges; edges that reference
        unknown tasks are left out (``validate`` reports them)."""
        if self._digraph is None:
            g = nx.DiGraph()
            g.add_nodes_from(self.task_ids)
            g.add_edges_from(
                (p, c) for p, c in self._edges if p in self._index and c in self._index
            )
            self._digraph = g
        return self._digraph

    def parents(self, task_id: str) -> List[str]:
        self.index(task_id)
        return list(self.digraph.predecessors(task_id))

    def children(self, task_id: str) -> List[str]:
        self.index(task_id)
        return list(self.digraph.successors(task_id))

    def descendants(self, task_id: str) -> Set[str]:
        """Tasks of the sub-graph rooted at ``task_id``, ``task_id`` included."""
        return descendants(self, task_id)

    def with_deadline(self, deadline: float) -> "TaskGraph":
        """Returns a copy of the graph with another deadline."""
        return TaskGraph(self._tasks, edges=self._edges, deadline=deadline)

    def subgraph(self, task_ids: Iterable[str], deadline: Optional[float] = None) -> "TaskGraph":
        """Returns the graph induced by ``task_ids``, keeping row order."""
        keep = set(task_ids)
        for task_id in keep:
            self.index(task_id)
        tasks = [task for task in self._tasks if task.id in keep]
        edges = [(p, c) for p, c in self._edges if p in keep and c in keep]
        return TaskGraph(
            tasks, edges=edges, deadline=self._deadline if deadline is None else deadline
        )

    # ------------------------------------------------------------------ #
    # design point matrices
    # ------------------------------------------------------------------ #
    def _build_dataset(self) -> xr.Dataset:
        m = self.n_design_point
        if self.n_task == 0 or m == 0:
            raise InvalidGraphError(["graph needs at least one task and one design point"])

        ds = xr.Dataset(
            coords={
                tgc.TASK_ID: xr.DataArray(
                    self.task_ids, dims=[tgc.TASK_DIM], attrs=tgc.TASK_ID_ATTRS
                ),
                tgc.DESIGN_POINT: xr.DataArray(
                    np.arange(1, m + 1),
                    dims=[tgc.DESIGN_POINT_DIM],
                    attrs=tgc.DESIGN_POINT_ATTRS,
                ),
            }
        )
        ds[tgc.TASK_LABEL] = xr.DataArray(
            [task.label for task in self._tasks],
            dims=[tgc.TASK_DIM],
            attrs=tgc.TASK_LABEL_ATTRS,
        )

        for name in tgc.MATRIX_NAMES:
            ds[name] = xr.DataArray(
                data=np.array(
                    [[getattr(dp, name) for dp in task.design_points] for task in self._tasks],
                    dtype=np.float64,
                ),
                dims=tgc.MATRIX_DIMS,
                attrs=tgc.MATRIX_ATTRS[name],
            )

        ds.attrs["deadline"] = self._deadline
        ds.attrs.update({"deadline_" + k: v for k, v in tgc.DEADLINE_ATTRS.items()})
        return ds

    @property
    def dataset(self) -> xr.Dataset:
        """Internal ``xarray.Dataset`` holding the design point matrices."""
        if self._ds is None:
            self._ds = self._build_dataset()
        return self._ds

    @property
    def current(self) -> xr.DataArray:
        """Current matrix ``I`` of shape ``(n_task, n_design_point)``, mA."""
        return self.dataset[tgc.CURRENT]

    @property
    def duration(self) -> xr.DataArray:
        """Execution time matrix ``D`` of shape ``(n_task, n_design_point)``,
        minutes."""
        return self.dataset[tgc.DURATION]

    @property
    def voltage(self) -> xr.DataArray:
        """Relative voltage of each design point."""
        return self.dataset[tgc.VOLTAGE]

    @property
    def energy(self) -> xr.DataArray:
        """Energy of each design point, ``I * V * D`` (mA min)."""
        energy = self.current * self.voltage * self.duration
        energy.attrs = {"long_name": "Energy of each design point", "units": "mA min"}
        return energy.rename("energy")

    @property
    def mean_current(self) -> Dict[str, float]:
        """Mean design point current of each task."""
        return {task.id: mean_current(task) for task in self._tasks}

    @property
    def mean_energy(self) -> Dict[str, float]:
        """Mean design point energy of each task."""
        return {task.id: mean_energy(task) for task in self._tasks}

    def energy_order(self) -> List[str]:
        return energy_order(self)

    def current_extremes(self) -> Tuple[float, float]:
        return current_extremes(self)

    def energy_bounds(self) -> Tuple[float, float]:
        return energy_bounds(self)


def energy_order(graph: TaskGraph) -> List[str]:
    """The Energy Vector: task ids sorted by ascending mean design point
    energy, ties broken by id."""
    energies = graph.mean_energy
    return sorted(energies, key=lambda task_id: (energies[task_id], task_id))


def descendants(graph: TaskGraph, task_id: str) -> Set[str]:
    """All tasks reachable from ``task_id`` through precedence edges, plus
    ``task_id`` itself."""
    graph.index(task_id)
    if task_id not in graph._descendants:
        graph._descendants[task_id] = frozenset(nx.descendants(graph.digraph, task_id)) | {
            task_id
        }
    return set(graph._descendants[task_id])


def current_extremes(graph: TaskGraph) -> Tuple[float, float]:
    """Smallest and largest current over all design points of all tasks."""
    current = graph.current.values
    return float(current.min()), float(current.max())


def energy_bounds(graph: TaskGraph) -> Tuple[float, float]:
    """Total energy when every task runs at its lowest powered (column m)
    and at its highest powered (column 1) design point."""
    energy = graph.energy.values
    return float(energy[:, -1].sum()), float(energy[:, 0].sum())
