import numpy as np
import pytest

from scenario_bounds.bounds.intervals import ModeEnum, certificate, extract_ci
from scenario_bounds.bounds.sampling import BoundConfig, draw_uniforms, sample_bounds_grid
from scenario_bounds.quantiles.tests.factories import ScenarioPairFactory
from scenario_bounds.quantiles.types import BoundSamples, ViolationParams
from scenario_bounds.utils.exceptions import EmptySamples, InvalidAlpha


@pytest.fixture
def uniform_samples():
    z = draw_uniforms(2021, 0, 100000)
    return BoundSamples(z, z, seed=2021)


@pytest.fixture
def bracketing_samples():
    pair = ScenarioPairFactory(shift=30.0, scale=1.4)
    cfg = BoundConfig(n_samples=20000, seed=8, violation=ViolationParams(0.03, 0.03))
    return sample_bounds_grid(pair, cfg)


def test_uniform_draws_give_uniform_quantiles(uniform_samples):
    ci = extract_ci(uniform_samples, 0.8)
    assert ci.lower == pytest.approx(0.1, abs=0.01)
    assert ci.upper == pytest.approx(0.9, abs=0.01)
    assert ci.tail_split == (pytest.approx(0.1), pytest.approx(0.9))
    assert ci.certificate >= 0.8


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.8, 0.99])
def test_all_zero_samples(alpha):
    zeros = np.zeros(1000)
    ci = extract_ci(BoundSamples(zeros, zeros, seed=0), alpha)
    assert (ci.lower, ci.upper) == (0.0, 0.0)
    assert ci.certificate == 1.0


@pytest.mark.parametrize("alpha", [0.5, 0.8, 0.95])
@pytest.mark.parametrize("mode", list(ModeEnum))
def test_certificate_reaches_alpha(bracketing_samples, alpha, mode):
    ci = extract_ci(bracketing_samples, alpha, mode)
    assert ci.certificate >= alpha
    assert ci.certificate == certificate(bracketing_samples, ci.lower, ci.upper)


def test_symmetric_intervals_nest_in_alpha(bracketing_samples):
    intervals = [extract_ci(bracketing_samples, alpha) for alpha in (0.5, 0.8, 0.95)]
    assert intervals[1].contains(intervals[0])
    assert intervals[2].contains(intervals[1])


def test_shortest_mode_is_not_wider():
    skewed = np.sort(-np.log1p(-draw_uniforms(4, 0, 50000)))
    samples = BoundSamples(skewed, skewed, seed=4)
    symmetric = extract_ci(samples, 0.8)
    shortest = extract_ci(samples, 0.8, mode="shortest")
    assert shortest.width < symmetric.width
    assert shortest.tail_split[0] < symmetric.tail_split[0]
    assert shortest.tail_split[1] - shortest.tail_split[0] == pytest.approx(0.8)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.5, float("nan")])
def test_alpha_must_be_a_probability(uniform_samples, alpha):
    with pytest.raises(InvalidAlpha):
        extract_ci(uniform_samples, alpha)


def test_empty_samples():
    with pytest.raises(EmptySamples):
        extract_ci(BoundSamples(np.empty(0), np.empty(0), seed=0), 0.8)
