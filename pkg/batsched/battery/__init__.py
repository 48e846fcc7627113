from .model import (
    BatteryParams,
    DischargeProfile,
    estimate_lifetime,
    sigma,
    sigma_at_completion,
    sigma_at_completion_batch,
)

__all__ = (
    "BatteryParams",
    "DischargeProfile",
    "estimate_lifetime",
    "sigma",
    "sigma_at_completion",
    "sigma_at_completion_batch",
)
