import logging
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from batsched.battery.model import BatteryParams
from batsched.exceptions import DeadlineInfeasibleError, InvalidGraphError
from batsched.graph.taskgraph import TaskGraph
from batsched.schedule.baseline import baseline_schedule
from batsched.schedule.driver import ScheduleOptions, schedule

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["deadline", "sigma_ours", "sigma_baseline", "pct_diff", "status"]


def deadline_sweep(
    graph: TaskGraph,
    params: BatteryParams,
    deadlines: Iterable[float],
    options: Optional[ScheduleOptions] = None,
) -> pd.DataFrame:
    """Battery cost of the battery-aware schedule and of the minimum energy
    baseline for each deadline.

    Parameters
    ----------
    graph : TaskGraph
        Task graph; its own deadline is replaced by each entry of ``deadlines``
    params : BatteryParams
        Battery model constants
    deadlines : iterable of float
        Deadlines to evaluate (minutes)
    options : ScheduleOptions, optional
        Options of the battery-aware schedule

    Returns
    -------
    table : pandas.DataFrame
        One row per deadline with columns ``deadline``, ``sigma_ours``,
        ``sigma_baseline``, ``pct_diff`` (baseline excess over ours, percent)
        and ``status`` (``"ok"``, ``"infeasible"`` or ``"invalid"`` for
        deadlines that are not positive and finite; costs are NaN unless
        ``"ok"``)
    """
    rows = []
    for d in deadlines:
        d = float(d)
        try:
            candidate = graph.with_deadline(d)
            ours = schedule(candidate, params, options).sigma
            theirs = baseline_schedule(candidate, params).sigma
        except DeadlineInfeasibleError as e:
            logger.info("deadline %g min is infeasible: %s", d, e)
            rows.append([d, np.nan, np.nan, np.nan, "infeasible"])
            continue
        except InvalidGraphError as e:
            logger.info("deadline %g min is invalid: %s", d, e)
            rows.append([d, np.nan, np.nan, np.nan, "invalid"])
            continue
        rows.append([d, ours, theirs, 100.0 * (theirs - ours) / ours, "ok"])

    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
