import numpy as np

import batsched as bs
from batsched.battery.model import sigma_at_completion_batch


class BatteryModel:

    params = [10, 100, 1000]
    param_names = ["n_interval"]

    def setup(self, n_interval):
        rng = np.random.default_rng(0)
        self.currents = rng.uniform(0.0, 1000.0, n_interval)
        self.durations = rng.uniform(0.1, 20.0, n_interval)
        self.profile = bs.DischargeProfile(self.currents, self.durations)
        self.battery = bs.BatteryParams(beta=0.273)

        # 1000 profiles of the same shape for the batched kernel
        self.batch_currents = rng.uniform(0.0, 1000.0, (1000, n_interval))
        self.batch_durations = rng.uniform(0.1, 20.0, (1000, n_interval))

    def time_sigma_at_completion(self, n_interval):
        """Time to evaluate one profile at its completion time"""
        bs.sigma_at_completion(self.profile, self.battery)

    def time_sigma_at_completion_batch(self, n_interval):
        """Time to evaluate 1000 profiles at their completion times"""
        sigma_at_completion_batch(self.batch_currents, self.batch_durations, self.battery)

    def time_estimate_lifetime(self, n_interval):
        """Time of the lifetime search"""
        bs.estimate_lifetime(self.profile, bs.BatteryParams(beta=0.273, alpha=1.0e4))
