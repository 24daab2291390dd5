import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scenario_bounds.quantiles.interpolation import (
    MonotoneInterpolant,
    build_cdf_interpolant,
    build_quantile_interpolant,
    evaluate,
    value_range,
)
from scenario_bounds.quantiles.types import uniform_labels, validate_series
from scenario_bounds.utils.exceptions import DegenerateSeries

increments = st.lists(
    st.floats(min_value=0.0, max_value=1e3, allow_nan=False, allow_infinity=False),
    min_size=2,
    max_size=40,
)


def _knots(steps):
    y = np.cumsum(np.asarray(steps, dtype=float))
    x = np.linspace(0.0, 1.0, y.size)
    return x, y


@given(increments)
@settings(max_examples=100, deadline=None)
def test_knots_are_reproduced_exactly(steps):
    x, y = _knots(steps)
    interp = MonotoneInterpolant(x, y)
    values = evaluate(interp, x)
    assert np.all(np.abs(values - y) <= 1e-12 * np.maximum(np.abs(y), 1.0))


@given(increments)
@settings(max_examples=100, deadline=None)
def test_monotone_on_a_dense_grid(steps):
    x, y = _knots(steps)
    interp = MonotoneInterpolant(x, y)
    values = evaluate(interp, np.linspace(0.0, 1.0, 10000))
    assert np.all(np.diff(values) >= 0.0)
    assert values[0] >= y[0] and values[-1] <= y[-1]


@given(
    st.floats(min_value=-1e3, max_value=1e3),
    st.floats(min_value=1e-3, max_value=1e3),
    st.integers(min_value=2, max_value=30),
)
@settings(max_examples=100, deadline=None)
def test_linear_data_is_reproduced(intercept, slope, count):
    x = np.linspace(0.0, 10.0, count)
    interp = MonotoneInterpolant(x, intercept + slope * x)
    query = np.linspace(0.0, 10.0, 997)
    expected = intercept + slope * query
    assert np.all(np.abs(evaluate(interp, query) - expected) <= 1e-10 * np.maximum(np.abs(expected), 1.0))


def test_queries_outside_the_knots_are_clamped():
    interp = MonotoneInterpolant([0.0, 1.0, 2.0], [10.0, 20.0, 40.0])
    assert evaluate(interp, -5.0) == 10.0
    assert evaluate(interp, 7.0) == 40.0
    assert isinstance(interp(0.5), float)
    assert interp.domain == (0.0, 2.0)


def test_quantile_interpolant_hits_reported_values(toy_labels):
    series = validate_series(toy_labels, [0, 10, 20, 30, 40])
    quantile = build_quantile_interpolant(series)
    np.testing.assert_array_equal(quantile(toy_labels.array), series.array)
    assert quantile(0.2) == pytest.approx(5.0)


def test_cdf_interpolant_collapses_ties_to_the_last_label(toy_labels):
    series = validate_series(toy_labels, [10, 10, 20, 20, 20])
    cdf = build_cdf_interpolant(series)
    assert len(cdf) == 2
    assert cdf(10.0) == pytest.approx(0.3)
    assert cdf(20.0) == pytest.approx(0.9)


def test_constant_series_gives_a_step(toy_labels):
    series = validate_series(toy_labels, [7, 7, 7, 7, 7])
    cdf = build_cdf_interpolant(series)
    assert cdf.degenerate
    assert cdf(6.9) == pytest.approx(0.1)
    assert cdf(7.0) == pytest.approx(0.9)
    with pytest.raises(DegenerateSeries):
        build_cdf_interpolant(series, strict=True)


def test_value_range_spans_both_series():
    labels = uniform_labels(5)
    low = validate_series(labels, [0, 1, 2, 3, 4])
    high = validate_series(labels, [2, 3, 4, 5, 9])
    grid = value_range(low, high, points=101)
    assert grid.size == 101
    assert (grid[0], grid[-1]) == (0.0, 9.0)
