import numpy as np
import pytest

from scenario_bounds.bounds.violation import (
    ReadingEnum,
    approx_epsilon,
    approx_epsilon_by_week,
    estimate_epsilon,
)
from scenario_bounds.oracle.laws import GaussianLaw
from scenario_bounds.oracle.universe import generate_comonotonic, quantize, weekly_universes
from scenario_bounds.quantiles.types import (
    ProvenanceEnum,
    QuantileLabels,
    make_pair,
    uniform_labels,
)
from scenario_bounds.utils.exceptions import (
    EmptyInput,
    LabelMismatch,
    PostDivergenceWeek,
    ScenarioBoundsError,
)


def test_shifted_series(shifted_pair):
    trace = estimate_epsilon([shifted_pair])
    assert trace.final.eps_u == pytest.approx(0.4)
    assert trace.final.eps_l == pytest.approx(0.4)
    assert trace.final.provenance is ProvenanceEnum.ESTIMATED

    by_index = {c.index: c for c in trace.contributions}
    # at the grid edges only one label gap is reachable
    assert by_index[1].eps_u == pytest.approx(0.2)
    assert by_index[3].eps_l == pytest.approx(0.2)
    # missing neighbours contribute nothing
    assert by_index[0].eps_u == 0.0
    assert by_index[4].eps_l == 0.0


def test_identical_series_round_up_to_one_gap(identical_pair):
    final = estimate_epsilon([identical_pair]).final
    assert (final.eps_l, final.eps_u) == (pytest.approx(0.2), pytest.approx(0.2))


def test_identical_hub_series_stay_within_the_largest_gap(hub_labels):
    values = [1000 * q for q in hub_labels]
    final = estimate_epsilon([make_pair(hub_labels, values, values, t=0, t_app=1)]).final
    assert final.eps_l <= 0.05 + 1e-12
    assert final.eps_u <= 0.1 + 1e-12


def test_literal_reading(identical_pair):
    final = estimate_epsilon([identical_pair], reading=ReadingEnum.LITERAL).final
    assert final.eps_u == 0.0
    assert final.eps_l == pytest.approx(0.2)
    assert estimate_epsilon([identical_pair], reading="literal").final == final


def test_staircase_is_bounded_by_the_estimate(toy_labels):
    pair = make_pair(toy_labels, (10, 10, 20, 20, 20), (10, 20, 20, 20, 20), t=0, t_app=1)
    approx = approx_epsilon([pair])
    assert approx.eps_l == pytest.approx(0.2, abs=1e-9)
    assert approx.eps_u == pytest.approx(0.0, abs=1e-9)
    estimate = estimate_epsilon([pair]).final
    assert estimate.eps_l >= 0.2
    assert estimate.dominates(approx, 1e-9)


def test_approximation_of_shifted_series(shifted_pair):
    approx = approx_epsilon([shifted_pair])
    assert approx.eps_u == pytest.approx(0.2, abs=1e-6)
    assert approx.eps_l == 0.0
    assert approx.provenance is ProvenanceEnum.INTERPOLATED
    assert estimate_epsilon([shifted_pair]).final.dominates(approx)


def test_identical_series_approximate_to_zero(identical_pair, hub_labels):
    assert approx_epsilon([identical_pair]).is_zero
    values = [50 + 3 * q for q in hub_labels]
    assert approx_epsilon([make_pair(hub_labels, values, values, t=0, t_app=1)]).is_zero


def test_weekly_results_and_maximum(toy_labels):
    weeks = [
        make_pair(toy_labels, (10, 10, 20, 20, 20), (10, 20, 20, 20, 20), t=0, t_app=2),
        make_pair(toy_labels, (0, 10, 20, 30, 40), (0, 10, 20, 30, 40), t=1, t_app=2),
    ]
    by_week = approx_epsilon_by_week(weeks)
    assert [t for t, _ in by_week] == [0, 1]
    assert by_week[1][1].is_zero
    assert approx_epsilon(weeks).eps_l == pytest.approx(0.2, abs=1e-9)

    trace = estimate_epsilon(weeks)
    maxima = trace.weekly_maxima()
    assert list(maxima) == [0, 1]
    assert trace.final.eps_l == max(eps_l for eps_l, _ in maxima.values())
    assert trace.final.eps_u == max(eps_u for _, eps_u in maxima.values())


def test_more_labels_shrink_the_estimate_for_comonotonic_weeks():
    universe = generate_comonotonic(20000, GaussianLaw(100, 20), GaussianLaw(100, 20), seed=3, t=0, t_app=1)
    coarse = estimate_epsilon([quantize(universe, QuantileLabels.hub())]).final
    dense = estimate_epsilon([quantize(universe, uniform_labels(201))]).final
    assert dense.eps_u < coarse.eps_u and dense.eps_l < coarse.eps_l
    assert dense.eps_u <= 0.98 / 200 + 1e-9


def test_stationary_weeks_have_steady_maxima(hub_labels):
    law = GaussianLaw(500, 50)
    universes = weekly_universes(10000, 4, 4, law, law, seed=11, growth=1.05)
    maxima = estimate_epsilon([quantize(u, hub_labels) for u in universes]).weekly_maxima()
    spread_u = max(v[1] for v in maxima.values()) - min(v[1] for v in maxima.values())
    spread_l = max(v[0] for v in maxima.values()) - min(v[0] for v in maxima.values())
    assert spread_u <= 0.1 and spread_l <= 0.1


def test_errors(toy_labels, shifted_pair):
    with pytest.raises(EmptyInput):
        estimate_epsilon([])
    with pytest.raises(EmptyInput):
        approx_epsilon([])

    late = make_pair(toy_labels, range(5), range(5), t=1, t_app=1)
    with pytest.raises(PostDivergenceWeek) as info:
        estimate_epsilon([shifted_pair, late])
    assert info.value.week == 1

    other = QuantileLabels((0.1, 0.2, 0.5, 0.7, 0.9))
    with pytest.raises(LabelMismatch):
        estimate_epsilon([shifted_pair, make_pair(other, range(5), range(5), t=0, t_app=1)])

    with pytest.raises(ScenarioBoundsError):
        approx_epsilon([shifted_pair], grid_points=50)


def test_crossing_gaussian_quantiles_stay_under_the_estimate(hub_labels):
    x = GaussianLaw(133.3, 6.8).transform(hub_labels.array)
    y = GaussianLaw(153.0, 33.4).transform(hub_labels.array)
    pair = make_pair(hub_labels, x, y, t=0, t_app=1)
    estimate = estimate_epsilon([pair]).final
    approx = approx_epsilon([pair])
    assert estimate.dominates(approx, 1e-9)
    assert not approx.is_zero


@pytest.mark.parametrize("seed", range(200))
def test_unordered_draws_stay_under_the_estimate(hub_labels, seed):
    rng = np.random.default_rng(seed)
    x = np.sort(rng.normal(100.0, 20.0, len(hub_labels)))
    y = np.sort(rng.normal(100.0, 20.0, len(hub_labels)))
    weeks = [make_pair(hub_labels, x, y, t=0, t_app=2), make_pair(hub_labels, y, x * 1.1, t=1, t_app=2)]
    estimate = estimate_epsilon(weeks).final
    assert estimate.dominates(approx_epsilon(weeks), 1e-9)
    for t, params in approx_epsilon_by_week(weeks):
        eps_l, eps_u = estimate_epsilon([weeks[t]]).weekly_maxima()[t]
        assert params.eps_l <= eps_l + 1e-9 and params.eps_u <= eps_u + 1e-9
