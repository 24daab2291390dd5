"""
Shape preserving cubic Hermite interpolation of quantile functions and CDFs.

Both directions are built on ``scipy.interpolate.PchipInterpolator`` (Fritsch-Carlson
harmonic mean slopes, one-sided three point end slopes). Evaluation never extrapolates:
queries outside the knot range are clamped to the nearest end knot.
"""
import logging
from typing import Optional, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from scenario_bounds.quantiles.types import QuantileSeries
from scenario_bounds.utils.exceptions import DegenerateSeries

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class MonotoneInterpolant:
    """
    Immutable monotone interpolant through ``(knots_x, knots_y)``.

    A ``degenerate`` interpolant has a single knot and acts as a step:
    ``floor`` strictly below the knot, ``knots_y[0]`` at and above it.
    """

    def __init__(self, knots_x, knots_y, degenerate=False, floor=None):
        self.knots_x = np.array(knots_x, dtype=float)
        self.knots_y = np.array(knots_y, dtype=float)
        self.degenerate = degenerate
        self.floor = floor
        if self.degenerate:
            self._pchip = None
            self.derivs = np.zeros(1)
        else:
            self._pchip = PchipInterpolator(self.knots_x, self.knots_y, extrapolate=False)
            self.derivs = self._pchip.derivative()(self.knots_x)
        for array in (self.knots_x, self.knots_y, self.derivs):
            array.setflags(write=False)

    def __len__(self):
        return int(self.knots_x.size)

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return evaluate(self, x)

    @property
    def domain(self):
        return float(self.knots_x[0]), float(self.knots_x[-1])


def evaluate(interp: MonotoneInterpolant, x: ArrayLike) -> ArrayLike:
    query = np.asarray(x, dtype=float)
    scalar = query.ndim == 0
    query = np.atleast_1d(query)

    if interp.degenerate:
        floor = interp.floor if interp.floor is not None else interp.knots_y[0]
        result = np.where(query < interp.knots_x[0], floor, interp.knots_y[0])
    else:
        clamped = np.clip(query, interp.knots_x[0], interp.knots_x[-1])
        result = interp._pchip(clamped)
        # exact at knots
        positions = np.searchsorted(interp.knots_x, clamped)
        positions = np.minimum(positions, interp.knots_x.size - 1)
        on_knot = interp.knots_x[positions] == clamped
        result = np.where(on_knot, interp.knots_y[positions], result)
        # the cubic can drift by round-off outside the bracketing knot values
        result = np.clip(result, interp.knots_y[0], interp.knots_y[-1])

    if scalar:
        return float(result[0])
    return result


def _collapse_ties(values: np.ndarray, labels: np.ndarray):
    """Merge runs of equal values, keeping the largest label of each run."""
    last_of_run = np.append(values[1:] != values[:-1], True)
    return values[last_of_run], labels[last_of_run]


def build_cdf_interpolant(
    series: QuantileSeries, strict: bool = False
) -> MonotoneInterpolant:
    """Map an outcome value to a probability."""
    values, labels = _collapse_ties(series.array, series.labels.array)
    if values.size == 1:
        if strict:
            raise DegenerateSeries(
                {"values": f"All quantile values equal {values[0]}; the CDF is a single step"}
            )
        logger.warning(
            "Quantile series is constant at %s; using a step CDF surrogate", values[0]
        )
        return MonotoneInterpolant(
            values, labels, degenerate=True, floor=float(series.labels.low)
        )
    if values.size < series.array.size:
        logger.debug("Collapsed %d tied quantile values", series.array.size - values.size)
    return MonotoneInterpolant(values, labels)


def build_quantile_interpolant(series: QuantileSeries) -> MonotoneInterpolant:
    """Map a probability to an outcome value."""
    return MonotoneInterpolant(series.labels.array, series.array)


def value_range(*series: QuantileSeries, points: Optional[int] = None) -> np.ndarray:
    """Uniform grid over the joint value range of the given series."""
    low = min(s.values[0] for s in series)
    high = max(s.values[-1] for s in series)
    return np.linspace(low, high, points or 1001)
