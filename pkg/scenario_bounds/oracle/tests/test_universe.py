import numpy as np
import pytest

from scenario_bounds.bounds.violation import estimate_epsilon
from scenario_bounds.oracle.laws import GaussianLaw, UniformLaw
from scenario_bounds.oracle.universe import (
    coverage_check,
    generate_comonotonic,
    inject_violation,
    nearest_rank_indices,
    plateau_regions,
    pre_divergence_staircase,
    quantize,
    true_epsilon,
    true_z,
    universe_with_matching,
    weekly_universes,
)
from scenario_bounds.quantiles.types import ConfidenceInterval, QuantileLabels
from scenario_bounds.utils.exceptions import InvalidUniverse, InvalidWindow


def test_identity_universe_pairs_by_rank():
    universe = universe_with_matching([1, 2, 3, 4], [4, 3, 2, 1], [0, 1, 2, 3])
    assert universe.pairs() == [(1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (4.0, 4.0)]
    assert universe.is_rank_aligned
    assert true_epsilon(universe).is_zero


def test_constant_shift_gives_constant_difference():
    x = np.arange(20, dtype=float)
    universe = universe_with_matching(x, x + 5, np.arange(20))
    np.testing.assert_array_equal(true_z(universe), np.full(20, -5.0))


def test_swapping_two_ranks():
    matching = np.arange(10)
    matching[[2, 6]] = [6, 2]
    universe = universe_with_matching(np.arange(10), np.arange(10), matching)
    eps = true_epsilon(universe)
    assert (eps.eps_l, eps.eps_u) == (pytest.approx(0.4), pytest.approx(0.4))
    assert eps.provenance.value == "oracle"


def test_invalid_universes():
    with pytest.raises(InvalidUniverse):
        universe_with_matching([1, 2, 3], [1, 2, 3], [0, 0, 1])
    with pytest.raises(InvalidUniverse):
        universe_with_matching([1, 2], [1, 2, 3], [0, 1])
    with pytest.raises(InvalidUniverse):
        generate_comonotonic(1)


def test_comonotonic_universe_is_rank_aligned():
    universe = generate_comonotonic(500, GaussianLaw(100, 20), UniformLaw(0, 5), seed=3)
    assert universe.is_rank_aligned
    assert np.all(np.diff(universe.x) >= 0) and np.all(np.diff(universe.y) >= 0)
    assert true_epsilon(universe).is_zero


def test_grid_latent_is_deterministic():
    a = generate_comonotonic(10, latent="grid", seed=1)
    b = generate_comonotonic(10, latent="grid", seed=2)
    np.testing.assert_array_equal(a.x, b.x)
    np.testing.assert_allclose(a.x, (np.arange(10) + 0.5) / 10)


def test_window_bounds_the_violation():
    universe = generate_comonotonic(10000, GaussianLaw(100, 20), GaussianLaw(80, 30), seed=1)
    shuffled = inject_violation(universe, 700, seed=2)
    eps = true_epsilon(shuffled)
    assert eps.eps_l <= 0.07 and eps.eps_u <= 0.07
    assert not shuffled.is_rank_aligned
    np.testing.assert_array_equal(np.sort(shuffled.matching), np.arange(10000))


def test_zero_window_changes_nothing():
    universe = generate_comonotonic(100, seed=1)
    assert inject_violation(universe, 0, seed=9) is universe


def test_extremal_window_reaches_the_bound():
    universe = generate_comonotonic(1000, seed=1)
    eps = true_epsilon(inject_violation(universe, 70, extremal=True))
    assert (eps.eps_l, eps.eps_u) == (pytest.approx(0.07), pytest.approx(0.07))


@pytest.mark.parametrize("window", [-1, 100])
def test_window_range(window):
    with pytest.raises(InvalidWindow):
        inject_violation(generate_comonotonic(100), window)


def test_quantize_uses_lower_nearest_rank():
    universe = universe_with_matching(np.arange(1, 101), np.arange(1, 101), np.arange(100))
    pair = quantize(universe, QuantileLabels((0.5, 0.75)))
    assert pair.x.values == (50.0, 75.0)

    small = universe_with_matching([1, 2, 3, 4], [1, 2, 3, 4], np.arange(4))
    assert quantize(small, QuantileLabels((0.25, 0.75))).y.values == (1.0, 3.0)
    assert list(nearest_rank_indices(10, QuantileLabels((0.01, 0.3, 0.99)))) == [0, 2, 9]


def test_coverage_check():
    ci = ConfidenceInterval(0.0, 1.0, 0.5, (0.25, 0.75), 0.6)
    assert coverage_check(ci, [-1.0, 0.0, 0.5, 1.0, 2.0]) == pytest.approx(0.6)
    assert coverage_check(ci, []) == 0.0


def test_weekly_universes_share_matching_and_diverge():
    weeks = weekly_universes(
        2000, 4, 2, GaussianLaw(100, 20), GaussianLaw(80, 30), seed=4, window=40, growth=1.1
    )
    assert [u.t for u in weeks] == [0, 1, 2, 3]
    for universe in weeks:
        np.testing.assert_array_equal(universe.matching, weeks[0].matching)
    np.testing.assert_array_equal(weeks[1].x, weeks[1].y)
    assert not np.array_equal(weeks[2].x, weeks[2].y)
    np.testing.assert_allclose(weeks[3].x, weeks[0].x * 1.1 ** 3)


def test_plateau_regions(hub_labels):
    assert plateau_regions(10000, hub_labels, [(3, 5)]) == [(500, 2000)]
    with pytest.raises(InvalidUniverse):
        plateau_regions(10000, hub_labels, [(0, 2)])
    with pytest.raises(InvalidUniverse):
        plateau_regions(10000, hub_labels, [(3, 5), (6, 8)])


def test_staircase_violation_is_overestimated(hub_labels):
    universe = pre_divergence_staircase(
        10000, hub_labels, [(3, 5), (9, 12)], law=GaussianLaw(500, 50), seed=1
    )
    truth = true_epsilon(universe)
    assert truth.eps_u > 0.1 and truth.eps_l > 0.1
    np.testing.assert_array_equal(true_z(universe), np.zeros(10000))

    estimate = estimate_epsilon([quantize(universe, hub_labels)]).final
    assert estimate.dominates(truth)
