import math

from hypothesis import HealthCheck, settings

settings.register_profile(
    "det",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("det")


def engineered_sample(target_mean: float, target_sd: float, n: int = 10) -> list[float]:
    """A sample whose mean and (n-1) std dev hit the targets to float precision.

    Uses the fixed zero-mean pattern (i - (n-1)/2), rescaled to unit sample
    standard deviation, then shifted and scaled.
    """
    base = [i - (n - 1) / 2 for i in range(n)]
    ss = sum(x * x for x in base)
    unit = [x / math.sqrt(ss / (n - 1)) for x in base]
    return [target_mean + target_sd * u for u in unit]
