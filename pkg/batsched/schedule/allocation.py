"""Design point allocation for a fixed task sequence.

Windows of eligible design point columns are scanned from the narrowest
feasible one down to the full window. Within a window, tasks are fixed one at
a time walking backwards from the end of the sequence, each at the column
with the lowest suitability score::

    B = SR + CR + ENR + CIF + DPF

Positions are 0-based; design point columns are 0-based internally and
1-based wherever they are reported (``Window.start``, ``AssignmentState.chosen``).
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import dask
import numpy as np

from batsched.battery.model import BatteryParams
from batsched.constants import ERROR_TOLERANCE, INT_DTYPE
from batsched.exceptions import (
    DeadlineInfeasibleError,
    InvalidArgumentError,
    WindowInfeasibleError,
)
from batsched.graph.taskgraph import TaskGraph
from batsched.schedule.cost import calculate_battery_cost
from batsched.schedule.state import AssignmentState, ScoreBreakdown, TaskState, Window

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WindowLog:
    """Battery cost of the assignment found for one window; ``sigma`` and
    ``delta`` are NaN when the window could not meet the deadline."""

    start: int
    sigma: float
    delta: float

    @property
    def feasible(self) -> bool:
        return bool(np.isfinite(self.sigma))


class _AllocationContext:
    """Design point matrices of ``graph`` with rows in sequence order, plus
    the graph-wide quantities every score needs."""

    def __init__(self, graph: TaskGraph, sequence: Sequence[str]):
        rows = np.array([graph.index(task_id) for task_id in sequence], dtype=INT_DTYPE)
        if len(set(sequence)) != graph.n_task or rows.size != graph.n_task:
            raise InvalidArgumentError("sequence must contain every task exactly once")

        self.sequence = list(sequence)
        self.n_task = graph.n_task
        self.n_design_point = graph.n_design_point

        self.duration = graph.duration.values[rows]
        self.current = graph.current.values[rows]
        self.energy = graph.energy.values[rows]

        position = {task_id: i for i, task_id in enumerate(self.sequence)}
        self.energy_positions = np.array(
            [position[task_id] for task_id in graph.energy_order()], dtype=INT_DTYPE
        )

        self.current_min, self.current_max = graph.current_extremes()
        self.energy_min, self.energy_max = graph.energy_bounds()

        self._positions = np.arange(self.n_task)

    def total_duration(self, columns: np.ndarray) -> float:
        return float(np.sum(self.duration[self._positions, columns]))

    def column_totals(self) -> np.ndarray:
        """``C_T(k)``, the completion time with every task at column k."""
        return self.duration.sum(axis=0)


# ---------------------------------------------------------------------- #
# score components
# ---------------------------------------------------------------------- #
def slack_ratio(t: float, d: float) -> float:
    """Fraction of the deadline left as slack after ``t`` minutes of work,
    negative when ``t`` exceeds ``d``."""
    if not d > 0:
        raise InvalidArgumentError(f"Deadline must be positive, got {d}")
    return (d - t) / d


def current_ratio(current: float, current_min: float, current_max: float) -> float:
    """Position of ``current`` between the smallest and largest design point
    currents of the graph, 0 when they coincide."""
    if current_max <= current_min:
        return 0.0
    return (current - current_min) / (current_max - current_min)


def energy_ratio(energy: float, energy_min: float, energy_max: float) -> float:
    """Position of the total energy ``energy`` between the all-column-m and
    all-column-1 energies, clamped to [0, 1]."""
    if energy_max <= energy_min:
        return 0.0
    return float(np.clip((energy - energy_min) / (energy_max - energy_min), 0.0, 1.0))


def cif(currents) -> float:
    """Current increase factor: fraction of adjacent transitions in
    execution order where the current strictly increases.

    Examples
    --------
    >>> cif([5, 3, 4, 4, 2])
    0.25
    """
    currents = np.asarray(currents, dtype=np.float64)
    if currents.size < 2:
        return 0.0
    return float(np.count_nonzero(np.diff(currents) > 0)) / (currents.size - 1)


def _dpf_formula(free_columns: np.ndarray, n_design_point: int, window_start: int) -> float:
    # column k (0-based) carries weight (m - 1 - k) / (m - 1 - ws)
    x = free_columns.size
    width = n_design_point - 1 - window_start
    return float(np.sum(n_design_point - 1 - free_columns)) / (width * x)


def dpf_formula(state: AssignmentState, window: Window) -> float:
    """Design point fraction of the rows that are neither tagged nor fixed.

    Each free row contributes ``(m - k) / (m - ws)`` for its column ``k``
    (1-based) in the window ``ws .. m``, averaged over the ``x`` free rows,
    so the value is 0 when all free rows are at column m and 1 when all are
    at the window start. Rows moved by the tentative completion stay free.

    Parameters
    ----------
    state : AssignmentState
        Working assignment
    window : Window
        Active window of at least two columns; free rows lie within it

    Returns
    -------
    dpf : float
    """
    m = state.n_design_point
    if window.n_design_point != m:
        raise InvalidArgumentError("Window and state disagree on the number of design points")
    if window.start >= m:
        raise InvalidArgumentError(
            "The design point fraction needs a window of at least two design points"
        )

    free = state.task_state == TaskState.FREE
    if not np.any(free):
        raise InvalidArgumentError(
            "The design point fraction needs at least one free row; use the slack of the "
            "tentative completion instead"
        )
    return _dpf_formula(state.columns[free], m, window.start - 1)


def _calculate_factors(ctx: _AllocationContext, columns: np.ndarray) -> Tuple[float, float]:
    positions = np.arange(ctx.n_task)
    chosen_current = ctx.current[positions, columns]
    total_energy = float(np.sum(ctx.energy[positions, columns]))
    return (
        cif(chosen_current),
        energy_ratio(total_energy, ctx.energy_min, ctx.energy_max),
    )


def calculate_factors(state: AssignmentState, graph: TaskGraph) -> Tuple[float, float]:
    """Current increase factor and energy ratio of the design points chosen
    in ``state``, read row by row in sequence order.

    Returns
    -------
    cif : float
    enr : float
    """
    ctx = _AllocationContext(graph, state.sequence)
    return _calculate_factors(ctx, state.columns)


def _calculate_dpf(
    ctx: _AllocationContext,
    state: AssignmentState,
    window_start: int,
    tagged_position: int,
    d: float,
) -> Tuple[float, float, float]:
    m = ctx.n_design_point
    columns = state.columns.copy()
    energy_state = state.energy_state.copy()

    tc = ctx.total_duration(columns)
    dpf = None

    while tc > d + ERROR_TOLERANCE:
        free = energy_state[ctx.energy_positions] == TaskState.FREE
        if not np.any(free):
            dpf = np.inf
            break

        q = ctx.energy_positions[np.argmax(free)]
        if columns[q] <= window_start:
            energy_state[q] = TaskState.FIXED
            continue

        # moving into the window start uses up the last step of this task
        if columns[q] == window_start + 1:
            energy_state[q] = TaskState.FIXED
        columns[q] -= 1
        tc = ctx.total_duration(columns)

    if dpf is None:
        # moved rows are fixed in the energy vector only, they still count here
        free = state.task_state == TaskState.FREE
        if window_start >= m - 1 or not np.any(free):
            dpf = max(d - tc, 0.0) / d
        else:
            dpf = _dpf_formula(columns[free], m, window_start)

    cif_value, enr = _calculate_factors(ctx, columns)

    logger.debug(
        "tagged row %d at column %d: tentative completion %.4g, dpf %.4g",
        tagged_position,
        int(state.columns[tagged_position]) + 1,
        tc,
        dpf,
    )
    return enr, cif_value, float(dpf)


def calculate_dpf(
    graph: TaskGraph,
    state: AssignmentState,
    window: Window,
    tagged_position: int,
    d: float,
) -> Tuple[float, float, float]:
    """Tentatively completes the assignment around the tagged row and scores
    it.

    Free rows are moved one column at a time towards the window start, in
    ascending order of mean energy, until the tentative completion time meets
    the deadline. A row moved into the window start is not moved again but
    still counts towards the design point fraction. All changes happen on
    working copies; ``state`` is left untouched.

    Parameters
    ----------
    graph : TaskGraph
        Task graph
    state : AssignmentState
        Assignment with exactly one tagged row and free rows at column m
    window : Window
        Active window
    tagged_position : int
        Position of the tagged row
    d : float
        Deadline (minutes)

    Returns
    -------
    enr : float
        Energy ratio of the tentative assignment
    cif : float
        Current increase factor of the tentative assignment
    dpf : float
        Design point fraction of the remaining free rows, the relative slack
        when none remain, or ``inf`` when the deadline cannot be met
    """
    if state.task_state[tagged_position] != TaskState.TAGGED:
        raise InvalidArgumentError(f"Row {tagged_position} is not tagged")
    ctx = _AllocationContext(graph, state.sequence)
    return _calculate_dpf(ctx, state, window.start - 1, tagged_position, d)


def _choose_design_points(
    ctx: _AllocationContext, window_start: int, d: float
) -> AssignmentState:
    n, m = ctx.n_task, ctx.n_design_point
    state = AssignmentState.initial(ctx.sequence, m)

    # the last task always runs at the lowest powered design point
    state.fix(n - 1, m - 1)
    t_sum = float(ctx.duration[n - 1, m - 1])

    for i in range(n - 2, -1, -1):
        best_b = np.inf
        best_j = None
        row_scores = {}

        for j in range(m - 1, window_start - 1, -1):
            state.tag(i, j)
            t_temp = t_sum + ctx.duration[i, j]
            enr, cif_value, dpf = _calculate_dpf(ctx, state, window_start, i, d)
            score = ScoreBreakdown(
                sr=slack_ratio(t_temp, d),
                cr=current_ratio(ctx.current[i, j], ctx.current_min, ctx.current_max),
                enr=enr,
                cif=cif_value,
                dpf=dpf,
            )
            state.untag(i)

            row_scores[j + 1] = score
            # ties keep the larger (lower powered) column
            if score.b < best_b:
                best_b = score.b
                best_j = j

        state.scores[i] = row_scores
        if best_j is None:
            raise WindowInfeasibleError(
                f"No design point of task {ctx.sequence[i]} within window "
                f"{window_start + 1}:{m} can meet the deadline {d}"
            )

        state.fix(i, best_j)
        t_sum += float(ctx.duration[i, best_j])

    total = ctx.total_duration(state.columns)
    if total > d + ERROR_TOLERANCE:
        raise WindowInfeasibleError(
            f"Assignment for window {window_start + 1}:{m} completes at {total:g}, "
            f"after the deadline {d}"
        )
    return state


def choose_design_points(
    graph: TaskGraph, sequence: Sequence[str], window: Window, d: float
) -> AssignmentState:
    """Fixes one design point per task of ``sequence`` within ``window``.

    The last task of the sequence is fixed at column m. Walking backwards
    from the second to last task, every column of the window is tagged in
    turn and scored; the task is then fixed at the column with the lowest
    score, the larger column winning ties.

    Parameters
    ----------
    graph : TaskGraph
        Task graph
    sequence : sequence of str
        Execution order
    window : Window
        Eligible columns
    d : float
        Deadline (minutes)

    Returns
    -------
    state : AssignmentState
        Fully fixed assignment meeting ``d``; ``state.scores`` holds the
        score of every evaluated candidate

    Raises
    ------
    WindowInfeasibleError
        When no assignment within the window meets the deadline
    """
    slack_ratio(0.0, d)
    ctx = _AllocationContext(graph, sequence)
    if window.n_design_point != ctx.n_design_point:
        raise InvalidArgumentError("Window and graph disagree on the number of design points")
    return _choose_design_points(ctx, window.start - 1, d)


def _evaluate_window(ctx, graph, window_start, d, params):
    try:
        state = _choose_design_points(ctx, window_start - 1, d)
    except WindowInfeasibleError as e:
        logger.debug("window %d:%d skipped: %s", window_start, ctx.n_design_point, e)
        return None, WindowLog(window_start, np.nan, np.nan)

    sigma, delta = calculate_battery_cost(graph, ctx.sequence, state, params)
    logger.debug(
        "window %d:%d: sigma %.6g mA min, delta %.6g min",
        window_start,
        ctx.n_design_point,
        sigma,
        delta,
    )
    return state, WindowLog(window_start, sigma, delta)


def first_window(graph: TaskGraph, d: float) -> int:
    """Narrowest window start (1-based) whose all-column completion time
    meets ``d``, starting the scan at column ``m - 1``.

    Raises
    ------
    DeadlineInfeasibleError
        When even every task at column 1 misses the deadline
    """
    column_totals = graph.duration.values.sum(axis=0)
    ws = max(graph.n_design_point - 1, 1)
    while d + ERROR_TOLERANCE < column_totals[ws - 1]:
        if ws == 1:
            raise DeadlineInfeasibleError(
                f"The deadline cannot be met: {d:g} min is shorter than the "
                f"all-fastest completion time {column_totals[0]:g} min"
            )
        ws -= 1
    return ws


def evaluate_windows(
    graph: TaskGraph,
    sequence: Sequence[str],
    d: float,
    params: BatteryParams,
    parallel: bool = False,
) -> Tuple[float, AssignmentState, List[WindowLog]]:
    """Allocates design points for ``sequence`` in every window from the
    narrowest feasible one down to the full window and keeps the cheapest.

    Parameters
    ----------
    graph : TaskGraph
        Task graph
    sequence : sequence of str
        Execution order
    d : float
        Deadline (minutes)
    params : BatteryParams
        Battery model constants
    parallel : bool, default=False
        Evaluate windows concurrently with ``dask`` on the threaded
        scheduler; the result is identical to the serial run

    Returns
    -------
    min_cost : float
        Lowest battery cost over all windows (mA min)
    state : AssignmentState
        Assignment attaining ``min_cost``, ties resolved towards the larger
        window start
    log : list of WindowLog
        One entry per evaluated window, in scan order

    Raises
    ------
    DeadlineInfeasibleError
        When the deadline cannot be met at column 1 or no window yields a
        feasible assignment
    """
    slack_ratio(0.0, d)
    ws = first_window(graph, d)
    starts = list(range(ws, 0, -1))
    ctx = _AllocationContext(graph, sequence)

    if parallel and len(starts) > 1:
        delayed = [
            dask.delayed(_evaluate_window)(ctx, graph, start, d, params) for start in starts
        ]
        results = dask.compute(*delayed, scheduler="threads")
    else:
        results = [_evaluate_window(ctx, graph, start, d, params) for start in starts]

    min_cost = np.inf
    best_state = None
    log = []
    for state, entry in results:
        log.append(entry)
        if state is not None and entry.sigma < min_cost:
            min_cost = entry.sigma
            best_state = state

    if best_state is None:
        raise DeadlineInfeasibleError(
            f"The deadline cannot be met: no window from {ws}:{graph.n_design_point} "
            f"down to 1:{graph.n_design_point} yields an assignment finishing by {d:g} min"
        )

    return float(min_cost), best_state, log
