"""
Property suites checked against synthetic universes.

Shared by ``manage.py validate`` and the test-suite. Every suite is deterministic
given ``(trials, seed)`` and returns a ``SuiteReport``; a suite never raises on a
failed check, it records it.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from django.conf import settings

from scenario_bounds.bounds.intervals import extract_ci
from scenario_bounds.bounds.sampling import (
    BoundConfig,
    MethodEnum,
    sample_bounds,
    width_convergence_probe,
)
from scenario_bounds.bounds.violation import approx_epsilon, estimate_epsilon
from scenario_bounds.oracle.laws import GaussianLaw, PiecewiseLinearLaw, UniformLaw
from scenario_bounds.oracle.universe import (
    CoupledUniverse,
    coverage_check,
    generate_comonotonic,
    inject_violation,
    pre_divergence_staircase,
    quantize,
    true_epsilon,
    true_z,
    universe_with_matching,
)
from scenario_bounds.quantiles.types import (
    QuantileLabels,
    ViolationParams,
    make_pair,
    uniform_labels,
)
from scenario_bounds.utils.exceptions import InvariantViolation

logger = logging.getLogger(__name__)

ALPHAS = (0.5, 0.8, 0.95)
COVERAGE_TOLERANCE = 0.01
UNIVERSE_SIZE = 10000
CONVERGENCE_LABEL_COUNTS = (11, 23, 51, 101, 201)
WIDENING_DELTAS = (0.01, 0.05, 0.1)
FLOAT_TOLERANCE = 1e-9


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str):
        self.checks += 1
        if not ok:
            self.failures.append(message)
            logger.warning("[%s] %s", self.name, message)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": list(self.failures),
            "details": self.details,
        }


def _rng(seed: int, suite: str, trial: int) -> np.random.Generator:
    tag = sum(ord(c) for c in suite)
    return np.random.default_rng([seed, tag, trial])


def _subseed(rng: np.random.Generator) -> int:
    return int(rng.integers(2 ** 32))


def _random_gaussian_pair(rng: np.random.Generator):
    x_law = GaussianLaw(rng.uniform(50.0, 150.0), rng.uniform(10.0, 30.0))
    y_law = GaussianLaw(x_law.mean + rng.uniform(-20.0, 20.0), x_law.std * rng.uniform(0.8, 1.25))
    return x_law, y_law


def _random_law(rng: np.random.Generator):
    kind = rng.integers(3)
    if kind == 0:
        return GaussianLaw(rng.uniform(-10.0, 10.0), rng.uniform(0.5, 5.0))
    if kind == 1:
        low = rng.uniform(-10.0, 10.0)
        return UniformLaw(low, low + rng.uniform(0.1, 20.0))
    points_w = np.sort(rng.uniform(0.0, 1.0, size=5))
    points_v = np.cumsum(rng.uniform(0.0, 3.0, size=5))
    return PiecewiseLinearLaw(tuple(points_w), tuple(points_v))


def coverage_suite(
    trials: int,
    seed: int,
    understate: bool = False,
    n: int = UNIVERSE_SIZE,
    labels: Optional[QuantileLabels] = None,
    alphas: Sequence[float] = ALPHAS,
    n_samples: Optional[int] = None,
) -> SuiteReport:
    """
    Intervals from the quantile-grid bounds must cover the true matched differences.

    Odd trials carry a small injected violation and are bounded with its true size.
    ``understate`` swaps in a negative control: identical uniform marginals shuffled
    within windows of 0.2 n and bounded as if there were no violation. That run is
    expected to fail.
    """
    report = SuiteReport("coverage")
    labels = labels or QuantileLabels.hub()
    n_samples = n_samples or settings.SCENARIO_BOUNDS_N_SAMPLES
    worst = 1.0

    for trial in range(trials):
        rng = _rng(seed, report.name, trial)
        if understate:
            law = UniformLaw()
            universe = generate_comonotonic(n, law, law, seed=_subseed(rng))
            universe = inject_violation(universe, int(0.2 * n), seed=_subseed(rng))
            violation = ViolationParams.zero()
        else:
            x_law, y_law = _random_gaussian_pair(rng)
            universe = generate_comonotonic(n, x_law, y_law, seed=_subseed(rng))
            if trial % 2:
                window = int(rng.integers(1, max(int(0.01 * n), 1) + 1))
                universe = inject_violation(universe, window, seed=_subseed(rng))
            violation = true_epsilon(universe)

        cfg = BoundConfig(n_samples=n_samples, seed=_subseed(rng), violation=violation)
        samples = sample_bounds(quantize(universe, labels), cfg)
        z = true_z(universe)
        for alpha in alphas:
            ci = extract_ci(samples, alpha)
            covered = coverage_check(ci, z)
            worst = min(worst, covered - alpha)
            report.check(
                covered >= alpha - COVERAGE_TOLERANCE,
                f"trial {trial}: coverage {covered:.4f} below alpha={alpha}",
            )
            report.check(
                ci.certificate >= alpha - FLOAT_TOLERANCE,
                f"trial {trial}: certificate {ci.certificate:.4f} below alpha={alpha}",
            )

    report.details = {"trials": trials, "understate": understate, "worst_margin": worst}
    return report


def rank_alignment_suite(trials: int, seed: int, exhaustive_max_n: int = 6) -> SuiteReport:
    """Rank-aligned universes have zero violation and only they do."""
    report = SuiteReport("rank-alignment")

    for trial in range(trials):
        rng = _rng(seed, report.name, trial)
        n = int(rng.integers(2, 500))
        universe = generate_comonotonic(n, _random_law(rng), _random_law(rng), seed=_subseed(rng))
        report.check(universe.is_rank_aligned, f"trial {trial}: comonotonic matching is not by rank")
        report.check(
            true_epsilon(universe).is_zero,
            f"trial {trial}: comonotonic universe has non-zero violation",
        )
        window = int(rng.integers(0, n))
        shuffled = inject_violation(universe, window, seed=_subseed(rng))
        report.check(
            np.array_equal(np.sort(shuffled.matching), np.arange(n)),
            f"trial {trial}: matching is no longer a bijection",
        )

    for n in range(2, exhaustive_max_n + 1):
        values = np.arange(n, dtype=float)
        for perm in itertools.permutations(range(n)):
            universe = universe_with_matching(values, values, perm)
            zero = true_epsilon(universe).is_zero
            report.check(
                zero == universe.is_rank_aligned,
                f"n={n} matching {perm}: zero violation {zero} but rank aligned "
                f"{universe.is_rank_aligned}",
            )

    report.details = {"trials": trials, "exhaustive_max_n": exhaustive_max_n}
    return report


def _random_plateaus(rng: np.random.Generator, first: int = 3, last: int = 19):
    plateaus = []
    j = int(rng.integers(first, first + 4))
    while j <= last and len(plateaus) < 3:
        m = min(j + int(rng.integers(0, 4)), last)
        plateaus.append((j, m))
        j = m + 2 + int(rng.integers(0, 4))
    return plateaus


def _weeks(universe: CoupledUniverse, weeks: int, growth: float) -> List[CoupledUniverse]:
    return [
        CoupledUniverse(universe.x * growth ** t, universe.y * growth ** t, universe.matching, t, weeks)
        for t in range(weeks)
    ]


def overestimation_suite(trials: int, seed: int, n: int = UNIVERSE_SIZE) -> SuiteReport:
    """
    The estimated violation never understates the true one, and the PCHIP
    approximation never exceeds the estimate.
    """
    report = SuiteReport("overestimation")
    labels = QuantileLabels.hub()
    largest_truth = 0.0

    for trial in range(trials):
        rng = _rng(seed, report.name, trial)
        plateaus = _random_plateaus(rng)
        law = GaussianLaw(rng.uniform(100.0, 1000.0), rng.uniform(10.0, 100.0))
        base = pre_divergence_staircase(n, labels, plateaus, law=law, seed=_subseed(rng))
        weeks = int(rng.integers(1, 5))
        pairs = [quantize(u, labels) for u in _weeks(base, weeks, rng.uniform(1.0, 1.2))]

        truth = true_epsilon(base)
        largest_truth = max(largest_truth, truth.eps_l, truth.eps_u)
        estimate = estimate_epsilon(pairs).final
        approx = approx_epsilon(pairs)
        report.check(
            estimate.dominates(truth),
            f"trial {trial}: estimate {estimate.as_dict()} understates truth {truth.as_dict()}",
        )
        report.check(
            estimate.dominates(approx, FLOAT_TOLERANCE),
            f"trial {trial}: approximation {approx.as_dict()} exceeds estimate",
        )

        # independent stochastic runs of the same pre-divergence law
        x = generate_comonotonic(n, law, law, seed=_subseed(rng))
        y = generate_comonotonic(n, law, law, seed=_subseed(rng))
        noisy = [
            make_pair(labels, quantize(x, labels).x.values, quantize(y, labels).y.values, t=0, t_app=1)
        ]
        estimate = estimate_epsilon(noisy).final
        approx = approx_epsilon(noisy)
        report.check(
            estimate.dominates(approx, FLOAT_TOLERANCE),
            f"trial {trial}: approximation {approx.as_dict()} exceeds estimate on noisy weeks",
        )

        # quantile functions of different spread cross each other
        x_law = GaussianLaw(rng.uniform(50.0, 200.0), rng.uniform(5.0, 15.0))
        y_law = GaussianLaw(x_law.mean + rng.uniform(-30.0, 30.0), rng.uniform(20.0, 40.0))
        crossing = [quantize(generate_comonotonic(n, x_law, y_law, seed=_subseed(rng), t=0, t_app=1), labels)]
        estimate = estimate_epsilon(crossing).final
        approx = approx_epsilon(crossing)
        report.check(
            estimate.dominates(approx, FLOAT_TOLERANCE),
            f"trial {trial}: approximation {approx.as_dict()} exceeds estimate on crossing weeks",
        )

    report.details = {"trials": trials, "largest_true_epsilon": largest_truth}
    return report


def _violating_universe(rng: np.random.Generator, n: int):
    x_law, y_law = _random_gaussian_pair(rng)
    universe = generate_comonotonic(n, x_law, y_law, seed=_subseed(rng))
    return inject_violation(universe, int(rng.integers(0, int(0.05 * n))), seed=_subseed(rng))


def ordering_suite(trials: int, seed: int, n: int = 2000, n_samples: int = 20000) -> SuiteReport:
    """``z_lower <= z_upper`` per draw, and widening the violation widens every draw."""
    report = SuiteReport("ordering")
    labels = QuantileLabels.hub()

    for trial in range(trials):
        rng = _rng(seed, report.name, trial)
        pair = quantize(_violating_universe(rng, n), labels)
        base = ViolationParams(rng.uniform(0.0, 0.1), rng.uniform(0.0, 0.1))
        sample_seed = _subseed(rng)
        for method in MethodEnum:
            cfg = BoundConfig(n_samples=n_samples, seed=sample_seed, method=method, violation=base)
            try:
                narrow = sample_bounds(pair, cfg)
            except InvariantViolation as error:
                report.check(False, f"trial {trial} {method.value}: {error}")
                continue
            report.check(
                narrow.n_samples == n_samples,
                f"trial {trial} {method.value}: drew {narrow.n_samples} samples",
            )
            for delta in WIDENING_DELTAS:
                try:
                    wide = sample_bounds(pair, cfg.with_violation(base.widened(delta)))
                except InvariantViolation as error:
                    report.check(False, f"trial {trial} {method.value} delta={delta}: {error}")
                    continue
                report.check(
                    bool(np.all(wide.z_upper >= narrow.z_upper - FLOAT_TOLERANCE)),
                    f"trial {trial} {method.value} delta={delta}: an upper draw shrank",
                )
                report.check(
                    bool(np.all(wide.z_lower <= narrow.z_lower + FLOAT_TOLERANCE)),
                    f"trial {trial} {method.value} delta={delta}: a lower draw rose",
                )

    report.details = {"trials": trials}
    return report


def widening_suite(trials: int, seed: int, n: int = 2000, n_samples: int = 20000) -> SuiteReport:
    """Intervals for a larger violation contain the intervals for a smaller one."""
    report = SuiteReport("widening")
    labels = QuantileLabels.hub()

    for trial in range(trials):
        rng = _rng(seed, report.name, trial)
        pair = quantize(_violating_universe(rng, n), labels)
        base = ViolationParams(rng.uniform(0.0, 0.1), rng.uniform(0.0, 0.1))
        cfg = BoundConfig(n_samples=n_samples, seed=_subseed(rng), violation=base)
        narrow = sample_bounds(pair, cfg)
        for delta in WIDENING_DELTAS:
            wide = sample_bounds(pair, cfg.with_violation(base.widened(delta)))
            for alpha in ALPHAS:
                inner, outer = extract_ci(narrow, alpha), extract_ci(wide, alpha)
                report.check(
                    outer.contains(inner),
                    f"trial {trial} delta={delta} alpha={alpha}: "
                    f"[{outer.lower}, {outer.upper}] does not contain [{inner.lower}, {inner.upper}]",
                )

    report.details = {"trials": trials}
    return report


def convergence_suite(
    seed: int,
    label_counts: Sequence[int] = CONVERGENCE_LABEL_COUNTS,
    n_samples: Optional[int] = None,
) -> SuiteReport:
    """
    With no violation the mean bound width shrinks towards zero as labels are added;
    the interpolated bounds have zero width outright.
    """
    report = SuiteReport("convergence")
    x_law, y_law = GaussianLaw(100.0, 20.0), GaussianLaw(80.0, 30.0)
    n_samples = n_samples or settings.SCENARIO_BOUNDS_N_SAMPLES

    def pair_at(count):
        labels = uniform_labels(count)
        return make_pair(labels, x_law.transform(labels.array), y_law.transform(labels.array))

    cfg = BoundConfig(n_samples=n_samples, seed=seed)
    rows = width_convergence_probe(pair_at, label_counts, cfg)
    widths = [row.mean_width for row in rows]
    for previous, current in zip(rows, rows[1:]):
        report.check(
            current.mean_width < previous.mean_width,
            f"width did not shrink from {previous.label_count} to {current.label_count} labels",
        )
    report.check(
        widths[-1] <= 0.1 * widths[0],
        f"final width {widths[-1]:.4g} is above 10% of the first {widths[0]:.4g}",
    )

    interp = width_convergence_probe(
        pair_at, label_counts, BoundConfig(n_samples=n_samples, seed=seed, method=MethodEnum.INTERPOLATED)
    )
    report.check(
        all(row.mean_width == 0.0 for row in interp),
        "interpolated bounds without violation have non-zero width",
    )

    plateau = width_convergence_probe(
        pair_at, label_counts, cfg.with_violation(ViolationParams(0.05, 0.05))
    )
    report.check(
        plateau[-1].mean_width >= 5 * widths[-1],
        "width with a fixed violation kept converging to zero",
    )

    report.details = {
        "label_counts": list(label_counts),
        "grid_widths": widths,
        "interpolated_widths": [row.mean_width for row in interp],
        "violated_widths": [row.mean_width for row in plateau],
    }
    return report


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "coverage": lambda trials, seed, understate=False: coverage_suite(trials, seed, understate),
    "rank-alignment": lambda trials, seed, understate=False: rank_alignment_suite(trials, seed),
    "overestimation": lambda trials, seed, understate=False: overestimation_suite(trials, seed),
    "ordering": lambda trials, seed, understate=False: ordering_suite(min(trials, 20), seed),
    "widening": lambda trials, seed, understate=False: widening_suite(min(trials, 20), seed),
    "convergence": lambda trials, seed, understate=False: convergence_suite(seed),
}


def run_suites(
    names: Optional[Sequence[str]], trials: int, seed: int, understate: bool = False
) -> List[SuiteReport]:
    reports = []
    for name in names or list(SUITES):
        logger.info("Running %s suite (trials=%d, seed=%d)", name, trials, seed)
        reports.append(SUITES[name](trials, seed, understate=understate))
    return reports
