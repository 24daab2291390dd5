import enum
import logging
import math

import numpy as np

from scenario_bounds.quantiles.types import BoundSamples, ConfidenceInterval
from scenario_bounds.utils.exceptions import EmptySamples, InvalidAlpha, ScenarioBoundsError

logger = logging.getLogger(__name__)

SPLIT_STEP = 0.001


class ModeEnum(enum.Enum):
    SYMMETRIC = "symmetric"
    SHORTEST = "shortest"


ModeChoices = [(e.value, e.name) for e in ModeEnum]


def certificate(samples: BoundSamples, lower: float, upper: float) -> float:
    """Lower bound on the probability that X - Y lies in ``[lower, upper]``."""
    covered_upper = np.count_nonzero(samples.z_upper <= upper)
    below_lower = np.count_nonzero(samples.z_lower < lower)
    return float((covered_upper - below_lower) / samples.n_samples)


def _ranks(n: int, p_low, p_high):
    # outward rounding: lower nearest rank for l, upper nearest rank for u
    low = np.clip(np.floor(np.asarray(p_low) * n).astype(int), 0, n - 1)
    high = np.clip(np.ceil(np.asarray(p_high) * n).astype(int) - 1, 0, n - 1)
    return low, high


def extract_ci(samples: BoundSamples, alpha: float, mode=ModeEnum.SYMMETRIC) -> ConfidenceInterval:
    if not 0.0 < alpha < 1.0 or math.isnan(alpha):
        raise InvalidAlpha({"alpha": f"Must lie strictly between 0 and 1, got {alpha}"})
    if samples.n_samples == 0:
        raise EmptySamples({"samples": "Cannot extract an interval from zero draws"})
    mode = ModeEnum(mode)

    n = samples.n_samples
    sorted_lower = np.sort(samples.z_lower)
    sorted_upper = np.sort(samples.z_upper)

    if mode is ModeEnum.SYMMETRIC:
        p_low = (1.0 - alpha) / 2.0
    elif mode is ModeEnum.SHORTEST:
        splits = np.round(np.arange(0.0, 1.0 - alpha + SPLIT_STEP, SPLIT_STEP), 3)
        splits = splits[splits <= 1.0 - alpha + 1e-12]
        low, high = _ranks(n, splits, splits + alpha)
        widths = sorted_upper[high] - sorted_lower[low]
        p_low = float(splits[int(np.argmin(widths))])
    else:
        raise ScenarioBoundsError({"mode": f"Unknown tail split mode {mode}"})

    p_high = min(p_low + alpha, 1.0)
    low, high = _ranks(n, p_low, p_high)
    lower, upper = float(sorted_lower[low]), float(sorted_upper[high])
    interval = ConfidenceInterval(
        lower=lower,
        upper=upper,
        alpha=alpha,
        tail_split=(p_low, p_high),
        certificate=certificate(samples, lower, upper),
    )
    logger.debug(
        "alpha=%s split=(%.3f, %.3f) interval=[%.6g, %.6g] certificate=%.4f",
        alpha,
        p_low,
        p_high,
        lower,
        upper,
        interval.certificate,
    )
    return interval
