"""Analytical battery model evaluated on piecewise-constant discharge
profiles.

The apparent charge lost by time ``T`` is

    sigma = sum_k I_k * (D_k + 2 * sum_{m=1..M} (exp(-b_m (T - t_k - D_k)) - exp(-b_m (T - t_k))) / b_m)

with ``b_m = beta^2 m^2``, ``t_k`` the start and ``D_k`` the duration of the
k-th interval. The correction series captures both the rate capacity effect
(charge that is temporarily unavailable right after a heavy load) and the
recovery effect (that charge coming back during idle time).
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple, Union

import numpy as np
import pandas as pd

from numba import njit, config
from scipy.optimize import bisect

from batsched.constants import (
    DEFAULT_SERIES_TERMS,
    ENABLE_JIT,
    ENABLE_JIT_CACHE,
    LIFETIME_RESOLUTION,
    LIFETIME_SCAN_STEPS,
    SURVIVES_PROFILE,
)
from batsched.exceptions import InvalidArgumentError

if not ENABLE_JIT:
    config.DISABLE_JIT = True

PROFILE_COLUMNS = ["start_min", "duration_min", "current_mA"]


@dataclass(frozen=True, eq=False)
class DischargeProfile:
    """Ordered sequence of back-to-back constant-current intervals.

    Interval ``k`` occupies ``[t_k, t_k + duration_k)`` where ``t_0 = 0`` and
    ``t_{k+1} = t_k + duration_k``. An explicit rest is a 0 mA interval.

    Parameters
    ----------
    currents : array_like
        Current drawn in each interval (mA), non-negative
    durations : array_like
        Length of each interval (minutes), strictly positive
    """

    currents: np.ndarray
    durations: np.ndarray
    starts: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        currents = np.array(self.currents, dtype=np.float64).reshape(-1)
        durations = np.array(self.durations, dtype=np.float64).reshape(-1)

        if currents.shape != durations.shape:
            raise InvalidArgumentError(
                f"Profile needs one duration per current, got {currents.size} currents "
                f"and {durations.size} durations"
            )
        if not (np.all(np.isfinite(currents)) and np.all(np.isfinite(durations))):
            raise InvalidArgumentError("Profile currents and durations must be finite")
        if np.any(currents < 0):
            raise InvalidArgumentError("Profile currents must be non-negative")
        if np.any(durations <= 0):
            raise InvalidArgumentError("Profile durations must be strictly positive")

        starts = np.zeros_like(durations)
        if durations.size > 1:
            starts[1:] = np.cumsum(durations[:-1])

        for arr in (currents, durations, starts):
            arr.flags.writeable = False

        object.__setattr__(self, "currents", currents)
        object.__setattr__(self, "durations", durations)
        object.__setattr__(self, "starts", starts)

    @classmethod
    def from_arrays(cls, currents, durations):
        """Constructs a profile from parallel current and duration arrays."""
        return cls(currents, durations)

    @classmethod
    def from_intervals(cls, intervals: Iterable[Tuple[float, float]]):
        """Constructs a profile from ``(current, duration)`` pairs."""
        intervals = list(intervals)
        if len(intervals) == 0:
            return cls(np.empty(0), np.empty(0))
        currents, durations = zip(*intervals)
        return cls(currents, durations)

    @classmethod
    def from_dataframe(cls, df: pd.DataFrame):
        """Constructs a profile from a ``pandas.DataFrame`` with the
        ``start_min``, ``duration_min`` and ``current_mA`` columns.

        Start times must be the cumulative sums of the durations; gaps must
        be written as explicit 0 mA rows.
        """
        missing = [c for c in PROFILE_COLUMNS if c not in df.columns]
        if missing:
            raise InvalidArgumentError(f"Profile table is missing columns {missing}")

        profile = cls(df["current_mA"].to_numpy(), df["duration_min"].to_numpy())
        if not np.allclose(profile.starts, df["start_min"].to_numpy(), rtol=1e-12, atol=1e-9):
            raise InvalidArgumentError(
                "Profile start times are not back-to-back cumulative sums of the durations"
            )
        return profile

    def to_dataframe(self) -> pd.DataFrame:
        """Returns the intervals as a ``pandas.DataFrame`` with one row per
        interval."""
        return pd.DataFrame(
            {
                "start_min": self.starts,
                "duration_min": self.durations,
                "current_mA": self.currents,
            },
            columns=PROFILE_COLUMNS,
        )

    @property
    def start_times(self) -> np.ndarray:
        """Start of each interval, the cumulative sum of the preceding
        durations."""
        return self.starts

    @property
    def n_interval(self) -> int:
        """Number of discharge intervals."""
        return self.currents.size

    @property
    def total_duration(self) -> float:
        """Length of the whole profile in minutes."""
        return float(np.sum(self.durations))

    @property
    def ideal_charge(self) -> float:
        """Charge drawn by the profile ignoring any non-linear effect, the
        lower bound of ``sigma`` at and after the end of the profile."""
        return float(np.dot(self.currents, self.durations))

    def __len__(self):
        return self.n_interval

    def __eq__(self, other):
        if not isinstance(other, DischargeProfile):
            return NotImplemented
        return np.array_equal(self.currents, other.currents) and np.array_equal(
            self.durations, other.durations
        )

    def __repr__(self):
        return (
            f"DischargeProfile(n_interval={self.n_interval}, "
            f"total_duration={self.total_duration:g})"
        )


@dataclass(frozen=True)
class BatteryParams:
    """Constants of the analytical battery model.

    Parameters
    ----------
    beta : float
        Non-linearity constant (per minute^(1/2)); larger values describe a
        more ideal battery
    alpha : float, optional
        Total available charge (mA min), only needed for lifetime estimation
    series_terms : int, default=10
        Number of terms of the correction series
    """

    beta: float
    alpha: Optional[float] = None
    series_terms: int = DEFAULT_SERIES_TERMS

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta <= 0:
            raise InvalidArgumentError(f"beta must be positive and finite, got {self.beta}")
        if int(self.series_terms) != self.series_terms or self.series_terms < 1:
            raise InvalidArgumentError(
                f"series_terms must be a positive integer, got {self.series_terms}"
            )
        if self.alpha is not None and (not np.isfinite(self.alpha) or self.alpha <= 0):
            raise InvalidArgumentError(f"alpha must be positive and finite, got {self.alpha}")
        object.__setattr__(self, "series_terms", int(self.series_terms))


@njit(cache=ENABLE_JIT_CACHE)
def _sigma_kernel(currents, starts, durations, T, beta, series_terms):
    """Evaluates the battery model at time ``T``, truncating every interval
    at ``T``."""
    beta_sq = beta * beta
    sigma = 0.0

    for k in range(currents.shape[0]):
        if currents[k] == 0.0 or starts[k] >= T:
            continue

        duration = min(durations[k], T - starts[k])

        # both gaps are >= 0 by construction
        end_gap = max(T - starts[k] - duration, 0.0)
        start_gap = max(T - starts[k], 0.0)

        series = 0.0
        for m in range(1, series_terms + 1):
            b = beta_sq * m * m
            series += (np.exp(-b * end_gap) - np.exp(-b * start_gap)) / b

        sigma += currents[k] * (duration + 2.0 * series)

    return sigma


@njit(cache=ENABLE_JIT_CACHE)
def _sigma_rows_at_completion(currents, durations, beta, series_terms):
    """Evaluates the battery model for every row of ``currents`` and
    ``durations``, each row being one back-to-back profile observed at its
    own completion time."""
    n_rows, n_cols = currents.shape
    out = np.empty(n_rows, dtype=np.float64)
    starts = np.empty(n_cols, dtype=np.float64)

    for r in range(n_rows):
        t = 0.0
        for k in range(n_cols):
            starts[k] = t
            t += durations[r, k]
        out[r] = _sigma_kernel(currents[r], starts, durations[r], t, beta, series_terms)

    return out


def sigma(profile: DischargeProfile, params: BatteryParams, T: float) -> float:
    """Apparent charge (mA min) lost by time ``T``.

    Intervals starting at or after ``T`` are ignored and an interval
    straddling ``T`` is clipped to end at ``T``.

    Parameters
    ----------
    profile : DischargeProfile
        Discharge profile starting at t = 0
    params : BatteryParams
        Battery model constants
    T : float
        Observation time in minutes, finite and non-negative

    Returns
    -------
    sigma : float
        Charge lost by time ``T``

    Examples
    --------
    >>> profile = DischargeProfile.from_intervals([(100.0, 10.0)])
    >>> round(sigma(profile, BatteryParams(beta=0.273), 10.0))
    3851
    """
    T = float(T)
    if not np.isfinite(T) or T < 0:
        raise InvalidArgumentError(f"Observation time must be finite and >= 0, got {T}")

    return float(
        _sigma_kernel(
            profile.currents,
            profile.starts,
            profile.durations,
            T,
            float(params.beta),
            params.series_terms,
        )
    )


def sigma_at_completion(
    profile: DischargeProfile, params: BatteryParams
) -> Tuple[float, float]:
    """Evaluates the battery model at the end of the profile.

    Returns
    -------
    sigma : float
        Charge lost when the last interval completes (mA min)
    delta : float
        Completion time of the profile (minutes)
    """
    if profile.n_interval == 0:
        raise InvalidArgumentError("Cannot evaluate an empty discharge profile")

    delta = profile.total_duration
    return sigma(profile, params, delta), delta


def sigma_at_completion_batch(
    currents: np.ndarray, durations: np.ndarray, params: BatteryParams
) -> np.ndarray:
    """Vectorized ``sigma_at_completion`` over many profiles of equal
    length.

    Parameters
    ----------
    currents, durations : np.ndarray of shape (n_profile, n_interval)
        One back-to-back profile per row

    Returns
    -------
    sigma : np.ndarray of shape (n_profile,)
    """
    currents = np.ascontiguousarray(currents, dtype=np.float64)
    durations = np.ascontiguousarray(durations, dtype=np.float64)

    if currents.ndim != 2 or currents.shape != durations.shape:
        raise InvalidArgumentError(
            "currents and durations must be 2D arrays of the same shape"
        )
    if currents.shape[1] == 0:
        raise InvalidArgumentError("Cannot evaluate empty discharge profiles")

    return _sigma_rows_at_completion(
        currents, durations, float(params.beta), params.series_terms
    )


def estimate_lifetime(
    profile: DischargeProfile, params: BatteryParams
) -> Union[float, str]:
    """Estimates when the battery is exhausted by the profile.

    The battery is exhausted at the first time ``T`` where
    ``sigma(profile, params, T) >= params.alpha``. A coarse forward scan of
    ``LIFETIME_SCAN_STEPS`` points locates the first crossing, which is then
    refined by bisection to ``LIFETIME_RESOLUTION`` minutes.

    Returns
    -------
    lifetime : float or str
        Lifetime in minutes, or ``"survives-profile"`` if the charge lost
        never reaches ``alpha`` before the profile ends
    """
    if params.alpha is None:
        raise InvalidArgumentError("Lifetime estimation requires BatteryParams.alpha")
    if profile.n_interval == 0:
        raise InvalidArgumentError("Cannot estimate a lifetime on an empty profile")

    alpha = float(params.alpha)
    scan = np.linspace(0.0, profile.total_duration, LIFETIME_SCAN_STEPS + 1)

    lower = 0.0
    for upper in scan[1:]:
        remaining = sigma(profile, params, upper) - alpha
        if remaining >= 0:
            if remaining == 0:
                return float(upper)
            return float(
                bisect(
                    lambda t: sigma(profile, params, t) - alpha,
                    lower,
                    upper,
                    xtol=LIFETIME_RESOLUTION / 2,
                )
            )
        lower = upper

    return SURVIVES_PROFILE
