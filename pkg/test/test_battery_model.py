import itertools
from unittest import TestCase

import numpy as np
import numpy.testing as nt
import pandas as pd

import batsched as bs
from batsched.battery.model import sigma_at_completion_batch
from batsched.constants import LIFETIME_RESOLUTION, LIFETIME_SCAN_STEPS, SURVIVES_PROFILE
from batsched.exceptions import InvalidArgumentError

try:
    import constants
except ImportError:
    from . import constants

G3_PARAMS = bs.BatteryParams(beta=constants.G3_BETA)


def _sigma_mp(intervals, T, beta, series_terms=10, precision=200):
    """Reference evaluation of the battery model in multiple precision."""
    import gmpy2

    context = gmpy2.get_context()
    saved = context.precision
    context.precision = precision
    try:
        beta = gmpy2.mpfr(beta)
        T = gmpy2.mpfr(T)
        total = gmpy2.mpfr(0)
        start = gmpy2.mpfr(0)
        for current, duration in intervals:
            current = gmpy2.mpfr(current)
            duration = gmpy2.mpfr(duration)
            series = gmpy2.mpfr(0)
            for m in range(1, series_terms + 1):
                b = beta * beta * m * m
                series += (gmpy2.exp(-b * (T - start - duration)) - gmpy2.exp(-b * (T - start))) / b
            total += current * (duration + 2 * series)
            start += duration
        return float(total)
    finally:
        context.precision = saved


class TestDischargeProfile(TestCase):

    def test_start_times(self):
        profile = bs.DischargeProfile.from_intervals([(100.0, 2.0), (0.0, 1.5), (50.0, 3.0)])
        nt.assert_array_equal(profile.start_times, [0.0, 2.0, 3.5])
        self.assertEqual(profile.total_duration, 6.5)
        self.assertEqual(profile.ideal_charge, 350.0)

    def test_invalid_intervals(self):
        with self.assertRaises(InvalidArgumentError):
            bs.DischargeProfile([10.0, 20.0], [1.0])
        with self.assertRaises(InvalidArgumentError):
            bs.DischargeProfile([-1.0], [1.0])
        with self.assertRaises(InvalidArgumentError):
            bs.DischargeProfile([1.0], [0.0])
        with self.assertRaises(InvalidArgumentError):
            bs.DischargeProfile([np.nan], [1.0])

    def test_read_only(self):
        profile = bs.DischargeProfile([10.0], [1.0])
        with self.assertRaises(ValueError):
            profile.currents[0] = 5.0

    def test_dataframe(self):
        profile = bs.DischargeProfile([300.0, 40.0], [2.0, 8.0])
        df = profile.to_dataframe()
        self.assertEqual(list(df.columns), ["start_min", "duration_min", "current_mA"])
        self.assertEqual(bs.DischargeProfile.from_dataframe(df), profile)

    def test_dataframe_with_gap(self):
        df = pd.DataFrame(
            {"start_min": [0.0, 5.0], "duration_min": [2.0, 1.0], "current_mA": [1.0, 2.0]}
        )
        with self.assertRaises(InvalidArgumentError):
            bs.DischargeProfile.from_dataframe(df)


class TestBatteryParams(TestCase):

    def test_defaults(self):
        self.assertEqual(G3_PARAMS.series_terms, 10)
        self.assertIsNone(G3_PARAMS.alpha)

    def test_invalid(self):
        for kwargs in ({"beta": 0.0}, {"beta": -1.0}, {"beta": np.inf}):
            with self.assertRaises(InvalidArgumentError):
                bs.BatteryParams(**kwargs)
        with self.assertRaises(InvalidArgumentError):
            bs.BatteryParams(beta=0.273, series_terms=0)
        with self.assertRaises(InvalidArgumentError):
            bs.BatteryParams(beta=0.273, alpha=0.0)


class TestSigma(TestCase):

    def test_zero_current(self):
        profile = bs.DischargeProfile.from_intervals([(0.0, 3.0), (0.0, 2.0)])
        self.assertEqual(bs.sigma(profile, G3_PARAMS, 5.0), 0.0)
        self.assertEqual(bs.sigma(profile, G3_PARAMS, 50.0), 0.0)

    def test_single_interval_reference(self):
        profile = bs.DischargeProfile.from_intervals([(100.0, 10.0)])
        result = bs.sigma(profile, G3_PARAMS, 10.0)

        nt.assert_allclose(result, _sigma_mp([(100.0, 10.0)], 10.0, 0.273), rtol=1e-7)
        nt.assert_allclose(result, constants.SINGLE_INTERVAL_SIGMA, rtol=1e-4)

    def test_multi_interval_reference(self):
        intervals = [(917.0, 7.3), (0.0, 2.5), (33.0, 22.0), (563.0, 11.2)]
        profile = bs.DischargeProfile.from_intervals(intervals)
        for T in (profile.total_duration, profile.total_duration + 12.0):
            nt.assert_allclose(
                bs.sigma(profile, G3_PARAMS, T),
                _sigma_mp(intervals, T, 0.273),
                rtol=1e-10,
            )

    def test_ideal_battery_limit(self):
        profile = bs.DischargeProfile.from_intervals([(100.0, 10.0)])
        result = bs.sigma(profile, bs.BatteryParams(beta=1e6), 10.0)
        nt.assert_allclose(result, 1000.0, rtol=1e-6)

    def test_invalid_time(self):
        profile = bs.DischargeProfile.from_intervals([(100.0, 10.0)])
        for T in (-1.0, np.inf, np.nan):
            with self.assertRaises(InvalidArgumentError):
                bs.sigma(profile, G3_PARAMS, T)

    def test_truncation(self):
        """Intervals after T are dropped and the straddling one clipped."""
        full = bs.DischargeProfile.from_intervals([(100.0, 4.0), (50.0, 6.0), (80.0, 3.0)])
        clipped = bs.DischargeProfile.from_intervals([(100.0, 4.0), (50.0, 2.0)])
        nt.assert_allclose(
            bs.sigma(full, G3_PARAMS, 6.0), bs.sigma(clipped, G3_PARAMS, 6.0), rtol=1e-14
        )

    def test_lower_bound_random_profiles(self):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            n = rng.integers(1, 8)
            profile = bs.DischargeProfile(
                rng.uniform(0.0, 1000.0, n), rng.uniform(0.1, 30.0, n)
            )
            params = bs.BatteryParams(beta=rng.uniform(0.05, 2.0))
            T = profile.total_duration + rng.uniform(0.0, 10.0)
            self.assertGreaterEqual(
                bs.sigma(profile, params, T), profile.ideal_charge * (1 - 1e-12)
            )

            ideal = bs.sigma(profile, bs.BatteryParams(beta=1e6), profile.total_duration)
            nt.assert_allclose(ideal, profile.ideal_charge, rtol=1e-6)

    def test_linearity(self):
        rng = np.random.default_rng(7)
        currents = rng.uniform(0.0, 500.0, 6)
        durations = rng.uniform(0.5, 10.0, 6)
        T = float(np.sum(durations))

        base = bs.sigma(bs.DischargeProfile(currents, durations), G3_PARAMS, T)
        scaled = bs.sigma(bs.DischargeProfile(3.5 * currents, durations), G3_PARAMS, T)
        nt.assert_allclose(scaled, 3.5 * base, rtol=1e-12)

    def test_additivity(self):
        intervals = [(400.0, 3.0), (120.0, 5.5), (250.0, 2.0)]
        profile = bs.DischargeProfile.from_intervals(intervals)
        T = profile.total_duration + 4.0

        parts = 0.0
        for k, (current, duration) in enumerate(intervals):
            offset = profile.start_times[k]
            if offset > 0:
                single = bs.DischargeProfile.from_intervals([(0.0, offset), (current, duration)])
            else:
                single = bs.DischargeProfile.from_intervals([(current, duration)])
            parts += bs.sigma(single, G3_PARAMS, T)

        nt.assert_allclose(bs.sigma(profile, G3_PARAMS, T), parts, rtol=1e-12)

    def test_recovery(self):
        profile = bs.DischargeProfile.from_intervals([(500.0, 5.0), (200.0, 3.0)])
        times = profile.total_duration + np.linspace(0.01, 30.0, 50)
        values = [bs.sigma(profile, G3_PARAMS, T) for T in times]
        self.assertTrue(np.all(np.diff(values) < 0))

    def test_split_interval(self):
        split = bs.DischargeProfile.from_intervals([(100.0, 5.0), (100.0, 5.0)])
        whole = bs.DischargeProfile.from_intervals([(100.0, 10.0)])
        nt.assert_allclose(
            bs.sigma_at_completion(split, G3_PARAMS)[0],
            bs.sigma_at_completion(whole, G3_PARAMS)[0],
            rtol=1e-12,
        )


class TestSigmaAtCompletion(TestCase):

    def test_zero_current(self):
        profile = bs.DischargeProfile.from_intervals([(0.0, 5.0)])
        self.assertEqual(bs.sigma_at_completion(profile, G3_PARAMS), (0.0, 5.0))

    def test_single_interval(self):
        profile = bs.DischargeProfile.from_intervals([(100.0, 10.0)])
        result, delta = bs.sigma_at_completion(profile, G3_PARAMS)
        nt.assert_allclose(result, _sigma_mp([(100.0, 10.0)], 10.0, 0.273), rtol=1e-7)
        self.assertEqual(delta, 10.0)

    def test_empty_profile(self):
        with self.assertRaises(InvalidArgumentError):
            bs.sigma_at_completion(bs.DischargeProfile.from_intervals([]), G3_PARAMS)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(3)
        currents = rng.uniform(0.0, 900.0, (20, 5))
        durations = rng.uniform(1.0, 20.0, (20, 5))

        batch = sigma_at_completion_batch(currents, durations, G3_PARAMS)
        for r in range(20):
            scalar, _ = bs.sigma_at_completion(
                bs.DischargeProfile(currents[r], durations[r]), G3_PARAMS
            )
            nt.assert_allclose(batch[r], scalar, rtol=1e-12)


class TestOrderingProperty(TestCase):

    def test_non_increasing_current_is_best(self):
        """Back-to-back independent tasks lose the least charge when run in
        non-increasing order of current and the most in non-decreasing
        order."""
        rng = np.random.default_rng(2024)
        perms = np.array(list(itertools.permutations(range(5))))

        for _ in range(20):
            currents = rng.uniform(10.0, 1000.0, 5)
            durations = rng.uniform(1.0, 20.0, 5)

            sigmas = sigma_at_completion_batch(currents[perms], durations[perms], G3_PARAMS)

            decreasing = np.argsort(-currents)
            increasing = np.argsort(currents)
            best = sigma_at_completion_batch(
                currents[decreasing][None, :], durations[decreasing][None, :], G3_PARAMS
            )[0]
            worst = sigma_at_completion_batch(
                currents[increasing][None, :], durations[increasing][None, :], G3_PARAMS
            )[0]

            nt.assert_allclose(best, sigmas.min(), rtol=1e-12)
            nt.assert_allclose(worst, sigmas.max(), rtol=1e-12)

    def test_slow_down_later_task(self):
        """With slack for a single down-scaling of one of two identical
        tasks, down-scaling the later task costs less."""
        fast, slow = (600.0, 4.0), (250.0, 6.0)
        later = bs.DischargeProfile.from_intervals([fast, slow])
        earlier = bs.DischargeProfile.from_intervals([slow, fast])
        self.assertLess(
            bs.sigma_at_completion(later, G3_PARAMS)[0],
            bs.sigma_at_completion(earlier, G3_PARAMS)[0],
        )


class TestLifetime(TestCase):

    def test_survives(self):
        profile = bs.DischargeProfile.from_intervals([(500.0, 30.0), (100.0, 60.0)])
        params = bs.BatteryParams(beta=0.273, alpha=1e9)
        self.assertEqual(bs.estimate_lifetime(profile, params), SURVIVES_PROFILE)

    def test_self_consistent(self):
        profile = bs.DischargeProfile.from_intervals([(100.0, 100.0)])
        alpha = bs.sigma(profile, G3_PARAMS, 50.0)
        params = bs.BatteryParams(beta=0.273, alpha=alpha)

        lifetime = bs.estimate_lifetime(profile, params)
        self.assertAlmostEqual(lifetime, 50.0, delta=LIFETIME_RESOLUTION)

    def test_before_first_scan_step(self):
        profile = bs.DischargeProfile.from_intervals([(1000.0, 100.0)])
        params = bs.BatteryParams(beta=0.273, alpha=1.0)

        lifetime = bs.estimate_lifetime(profile, params)
        self.assertLessEqual(lifetime, profile.total_duration / LIFETIME_SCAN_STEPS)
        self.assertGreater(lifetime, 0.0)

    def test_requires_alpha(self):
        profile = bs.DischargeProfile.from_intervals([(100.0, 10.0)])
        with self.assertRaises(InvalidArgumentError):
            bs.estimate_lifetime(profile, G3_PARAMS)
