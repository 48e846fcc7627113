"""Iterative battery-aware sequencing and design point allocation."""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from batsched.battery.model import BatteryParams, DischargeProfile
from batsched.constants import DEFAULT_MAX_ITERATIONS, DEFAULT_WEIGHT_MODE, WEIGHT_MODES
from batsched.exceptions import InvalidArgumentError
from batsched.graph.taskgraph import TaskGraph
from batsched.graph.validation import require_valid
from batsched.schedule.allocation import WindowLog, evaluate_windows
from batsched.schedule.cost import calculate_battery_cost, schedule_profile
from batsched.schedule.sequencing import sequence_dec_energy, weighted_sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScheduleOptions:
    """Options of ``schedule``.

    Parameters
    ----------
    max_iterations : int, default=50
        Upper bound on the number of sequencing and allocation passes
    weight_mode : {"current", "energy"}, default="current"
        Weight of the initial list scheduling pass
    parallel : bool, default=False
        Evaluate the windows of each pass concurrently
    """

    max_iterations: int = DEFAULT_MAX_ITERATIONS
    weight_mode: str = DEFAULT_WEIGHT_MODE
    parallel: bool = False

    def __post_init__(self):
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise InvalidArgumentError(
                f"max_iterations must be a positive integer, got {self.max_iterations}"
            )
        if self.weight_mode not in WEIGHT_MODES:
            raise InvalidArgumentError(
                f"weight_mode must be one of {WEIGHT_MODES}, got {self.weight_mode!r}"
            )


@dataclass(frozen=True)
class IterationLog:
    """Record of one pass of the scheduling loop.

    ``best_sigma`` is the smaller of the window-best cost and the cost of
    the weighted sequence under the window-best assignment.
    """

    iteration: int
    sequence: List[str]
    windows: List[WindowLog]
    window_sigma: float
    window_delta: float
    chosen: Dict[str, int]
    weighted_sequence: List[str]
    weighted_sigma: float
    weighted_delta: float

    @property
    def best_sigma(self) -> float:
        return min(self.window_sigma, self.weighted_sigma)

    @property
    def best_delta(self) -> float:
        if self.weighted_sigma < self.window_sigma:
            return self.weighted_delta
        return self.window_delta


@dataclass(frozen=True)
class ScheduleResult:
    """Outcome of ``schedule``: the lowest cost configuration observed over
    all iterations together with the full iteration log."""

    sequence: List[str]
    chosen: Dict[str, int]
    sigma: float
    delta: float
    deadline: float
    n_design_point: int
    converged: bool
    iterations: List[IterationLog] = field(default_factory=list)
    profile: Optional[DischargeProfile] = field(default=None, repr=False)

    def to_profile(self) -> DischargeProfile:
        """Discharge profile of the final schedule."""
        return self.profile

    def window_table(self) -> pd.DataFrame:
        """Per-sequence battery cost table.

        One row per evaluated sequence and per weighted sequence, with a
        ``sigma`` and ``delta`` column for every window start, the row's
        minimum cost ``min_sigma`` and its completion time ``min_delta``.
        Weighted sequences and windows that were not evaluated hold NaN.
        """
        starts = sorted({w.start for it in self.iterations for w in it.windows}, reverse=True)
        m = self.n_design_point

        rows = []
        for it in self.iterations:
            row = {"sequence": f"S{it.iteration}", "iteration": it.iteration}
            by_start = {w.start: w for w in it.windows}
            for start in starts:
                entry = by_start.get(start)
                row[f"sigma_{start}:{m}"] = entry.sigma if entry else np.nan
                row[f"delta_{start}:{m}"] = entry.delta if entry else np.nan
            row["min_sigma"] = it.window_sigma
            row["min_delta"] = it.window_delta
            rows.append(row)

            weighted = {"sequence": f"S{it.iteration}w", "iteration": it.iteration}
            for start in starts:
                weighted[f"sigma_{start}:{m}"] = np.nan
                weighted[f"delta_{start}:{m}"] = np.nan
            weighted["min_sigma"] = it.best_sigma
            weighted["min_delta"] = it.best_delta
            rows.append(weighted)

        return pd.DataFrame(rows).set_index("sequence")

    def to_dict(self) -> dict:
        """JSON ready report with tasks in sequence order."""
        return {
            "sequence": list(self.sequence),
            "chosen": [
                {"task": task_id, "design_point": int(self.chosen[task_id])}
                for task_id in self.sequence
            ],
            "sigma_mA_min": float(self.sigma),
            "delta_min": float(self.delta),
            "deadline_min": float(self.deadline),
            "converged": bool(self.converged),
            "iterations": [
                {
                    "iteration": it.iteration,
                    "sequence": list(it.sequence),
                    "windows": [
                        {
                            "window": f"{w.start}:{self.n_design_point}",
                            "sigma_mA_min": None if not w.feasible else float(w.sigma),
                            "delta_min": None if not w.feasible else float(w.delta),
                        }
                        for w in it.windows
                    ],
                    "window_sigma_mA_min": float(it.window_sigma),
                    "window_delta_min": float(it.window_delta),
                    "chosen": [
                        {"task": task_id, "design_point": int(it.chosen[task_id])}
                        for task_id in it.sequence
                    ],
                    "weighted_sequence": list(it.weighted_sequence),
                    "weighted_sigma_mA_min": float(it.weighted_sigma),
                    "best_sigma_mA_min": float(it.best_sigma),
                }
                for it in self.iterations
            ],
        }


def schedule(
    graph: TaskGraph,
    params: BatteryParams,
    options: Optional[ScheduleOptions] = None,
) -> ScheduleResult:
    """Battery-aware sequencing and design point allocation.

    Starting from the mean-weight list schedule, each pass allocates design
    points with ``evaluate_windows``, re-sequences the graph with sub-graph
    current weights under that allocation and costs the new sequence. The
    loop stops at the first pass whose best cost does not improve on the
    previous pass, or after ``options.max_iterations`` passes.

    Parameters
    ----------
    graph : TaskGraph
        Valid task graph; its deadline is the completion constraint
    params : BatteryParams
        Battery model constants
    options : ScheduleOptions, optional
        Loop options

    Returns
    -------
    result : ScheduleResult
        Lowest cost configuration over all passes

    Raises
    ------
    DeadlineInfeasibleError
        When the deadline cannot be met

    Examples
    --------
    >>> import batsched as bs
    >>> g3 = bs.load_g3()
    >>> result = bs.schedule(g3, bs.BatteryParams(beta=0.273))
    >>> result.delta <= g3.deadline
    True
    """
    if options is None:
        options = ScheduleOptions()
    require_valid(graph)
    d = graph.deadline

    sequence = sequence_dec_energy(graph, options.weight_mode)
    prev_cost = np.inf
    best = None
    iterations = []
    converged = False

    for iteration in range(1, options.max_iterations + 1):
        window_sigma, state, windows = evaluate_windows(
            graph, sequence, d, params, parallel=options.parallel
        )
        window_delta = next(w.delta for w in windows if w.sigma == window_sigma)
        chosen = state.chosen

        chosen_current = {
            task_id: float(graph.current.values[graph.index(task_id), column - 1])
            for task_id, column in chosen.items()
        }
        next_sequence = weighted_sequence(graph, chosen_current)
        temp_sigma, temp_delta = calculate_battery_cost(graph, next_sequence, chosen, params)

        log = IterationLog(
            iteration=iteration,
            sequence=list(sequence),
            windows=windows,
            window_sigma=window_sigma,
            window_delta=window_delta,
            chosen=chosen,
            weighted_sequence=next_sequence,
            weighted_sigma=temp_sigma,
            weighted_delta=temp_delta,
        )
        iterations.append(log)

        if temp_sigma < window_sigma:
            candidate = (temp_sigma, temp_delta, next_sequence)
        else:
            candidate = (window_sigma, window_delta, list(sequence))
        if best is None or candidate[0] < best[0]:
            best = (candidate[0], candidate[1], candidate[2], chosen)

        cost = log.best_sigma
        logger.debug(
            "iteration %d: window-best %.6g, weighted %.6g, previous %.6g",
            iteration,
            window_sigma,
            temp_sigma,
            prev_cost,
        )
        if cost >= prev_cost:
            converged = True
            logger.info("no improvement in iteration %d, stopping", iteration)
            break

        prev_cost = cost
        sequence = next_sequence
    else:
        logger.info("iteration cap of %d reached", options.max_iterations)

    sigma, delta, best_sequence, best_chosen = best
    profile = schedule_profile(graph, best_sequence, best_chosen)

    if params.alpha is not None and sigma > params.alpha:
        warnings.warn(
            "Schedule loses {0:.6g} mA min, more than the available battery "
            "charge {1:.6g} mA min".format(sigma, params.alpha),
            RuntimeWarning,
        )

    return ScheduleResult(
        sequence=best_sequence,
        chosen=dict(best_chosen),
        sigma=float(sigma),
        delta=float(delta),
        deadline=d,
        n_design_point=graph.n_design_point,
        converged=converged,
        iterations=iterations,
        profile=profile,
    )
