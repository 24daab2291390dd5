"""
Synthetic ground truth: two sorted outcome lists and the matching between them.

``x[i]`` is matched with ``y[matching[i]]``. Ranks are positions in the sorted
lists, so a rank-aligned (comonotonic) universe has ``matching[i] == i``.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from scenario_bounds.oracle.laws import AffineLaw
from scenario_bounds.quantiles.types import (
    ConfidenceInterval,
    PairMeta,
    ProvenanceEnum,
    QuantileLabels,
    ScenarioPair,
    ViolationParams,
    validate_series,
)
from scenario_bounds.utils.exceptions import InvalidUniverse, InvalidWindow

logger = logging.getLogger(__name__)

Latent = Union[str, Sequence[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class CoupledUniverse:
    x: np.ndarray
    y: np.ndarray
    matching: np.ndarray
    t: int = 0
    t_app: int = 0

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float)
        matching = np.array(self.matching, dtype=np.int64)
        if x.ndim != 1 or x.shape != y.shape or matching.shape != x.shape:
            raise InvalidUniverse({"x": "x, y and matching must have the same length"})
        if np.any(np.diff(x) < 0) or np.any(np.diff(y) < 0):
            raise InvalidUniverse({"x": "Outcome lists must be sorted ascending"})
        if not np.array_equal(np.sort(matching), np.arange(x.size)):
            raise InvalidUniverse({"matching": "Matching must be a bijection between ranks"})
        for array in (x, y, matching):
            array.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "matching", matching)

    @property
    def n(self) -> int:
        return int(self.x.size)

    @property
    def is_rank_aligned(self) -> bool:
        return bool(np.array_equal(self.matching, np.arange(self.n)))

    def pairs(self) -> List[Tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y[self.matching].tolist()))


def _latent(n: int, latent: Latent, seed: int) -> np.ndarray:
    if isinstance(latent, str):
        if latent == "grid":
            return (np.arange(n) + 0.5) / n
        if latent == "random":
            rng = np.random.default_rng(seed)
            return np.sort(rng.random(n))
        raise InvalidUniverse({"latent": f"Unknown latent scheme {latent!r}"})
    values = np.sort(np.asarray(latent, dtype=float))
    if values.size != n:
        raise InvalidUniverse({"latent": f"Expected {n} latent values, got {values.size}"})
    return values


def generate_comonotonic(
    n: int, x_law=None, y_law=None, seed: int = 0, latent: Latent = "random", t=0, t_app=0
) -> CoupledUniverse:
    """Both scenarios are non-decreasing transforms of one latent draw; matching is by rank."""
    if n < 2:
        raise InvalidUniverse({"n": "A universe needs at least two outcomes"})
    x_law = x_law or AffineLaw()
    y_law = y_law or AffineLaw()
    w = _latent(n, latent, seed)
    # guards against round-off in the inverse CDF tails
    x = np.maximum.accumulate(x_law.transform(w))
    y = np.maximum.accumulate(y_law.transform(w))
    return CoupledUniverse(x, y, np.arange(n), t, t_app)


def universe_with_matching(x, y, matching, t=0, t_app=0) -> CoupledUniverse:
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    return CoupledUniverse(x, y, matching, t, t_app)


def inject_violation(
    universe: CoupledUniverse,
    window: int,
    seed: int = 0,
    regions: Optional[Iterable[Tuple[int, int]]] = None,
    extremal: bool = False,
) -> CoupledUniverse:
    """
    Permute partners within blocks of ``window + 1`` consecutive x-ranks.

    No partner moves by more than ``window`` ranks. ``regions`` restricts the blocks
    to the given half-open rank ranges. With ``extremal`` the two ends of each block
    swap partners, so every full block reaches the window exactly.
    """
    n = universe.n
    if not 0 <= window < n:
        raise InvalidWindow({"window": f"Must satisfy 0 <= window < {n}, got {window}"})
    if window == 0:
        return universe

    rng = np.random.default_rng(seed)
    order = np.arange(n)
    for start, stop in regions if regions is not None else [(0, n)]:
        if not 0 <= start < stop <= n:
            raise InvalidWindow({"regions": f"Region ({start}, {stop}) is outside [0, {n})"})
        for block_start in range(start, stop, window + 1):
            block_stop = min(block_start + window + 1, stop)
            if block_stop - block_start < 2:
                continue
            if extremal:
                order[block_start], order[block_stop - 1] = block_stop - 1, block_start
            else:
                order[block_start:block_stop] = block_start + rng.permutation(
                    block_stop - block_start
                )
    return CoupledUniverse(
        universe.x, universe.y, universe.matching[order], universe.t, universe.t_app
    )


def true_epsilon(universe: CoupledUniverse) -> ViolationParams:
    """Exact violation from positional ranks of every matched pair."""
    shift = universe.matching - np.arange(universe.n)
    return ViolationParams(
        eps_l=max(int(-shift.min()), 0) / universe.n,
        eps_u=max(int(shift.max()), 0) / universe.n,
        provenance=ProvenanceEnum.ORACLE,
    )


def true_z(universe: CoupledUniverse) -> np.ndarray:
    """Every matched difference ``x_i - y_match(i)``."""
    return universe.x - universe.y[universe.matching]


def nearest_rank_indices(n: int, labels: QuantileLabels) -> np.ndarray:
    # round first so that q * n landing a hair above an integer does not skip a rank
    return np.array([max(math.ceil(round(q * n, 9)) - 1, 0) for q in labels], dtype=np.int64)


def quantize(
    universe: CoupledUniverse,
    labels: QuantileLabels,
    model_id: str = "oracle",
    target: str = "",
    location: str = "",
) -> ScenarioPair:
    """Lower nearest-rank empirical quantiles of both marginals."""
    index = nearest_rank_indices(universe.n, labels)
    return ScenarioPair(
        validate_series(labels, universe.x[index]),
        validate_series(labels, universe.y[index]),
        PairMeta(model_id, target, location, universe.t, universe.t_app),
    )


def coverage_check(ci: ConfidenceInterval, z) -> float:
    z = np.asarray(z, dtype=float)
    if z.size == 0:
        return 0.0
    return float(np.count_nonzero((z >= ci.lower) & (z <= ci.upper)) / z.size)


def weekly_universes(
    n: int,
    weeks: int,
    t_app: int,
    x_law,
    y_law,
    seed: int = 0,
    window: int = 0,
    growth: float = 1.0,
    latent: Latent = "random",
    extremal: bool = False,
) -> List[CoupledUniverse]:
    """
    One universe per week sharing a latent draw and a matching.

    Before ``t_app`` both scenarios follow ``x_law``. Week ``t`` is scaled by
    ``growth ** t``. Reusing one matching keeps the violation constant over time,
    so the pre-divergence weeks bound every later week.
    """
    if weeks < 1:
        raise InvalidUniverse({"weeks": "At least one week is required"})
    if growth <= 0:
        raise InvalidUniverse({"growth": "Must be positive"})
    base = generate_comonotonic(n, x_law, x_law, seed=seed, latent=latent)
    matching = inject_violation(base, window, seed=seed, extremal=extremal).matching

    universes = []
    for t in range(weeks):
        law_y = x_law if t < t_app else y_law
        week = generate_comonotonic(n, x_law, law_y, seed=seed, latent=latent, t=t, t_app=t_app)
        factor = growth ** t
        universes.append(CoupledUniverse(week.x * factor, week.y * factor, matching, t, t_app))
    return universes


def plateau_regions(
    n: int, labels: QuantileLabels, plateaus: Sequence[Tuple[int, int]]
) -> List[Tuple[int, int]]:
    """Rank ranges reported at exactly labels ``j..m`` of each ``(j, m)`` plateau."""
    regions = []
    previous_end = -2
    for j, m in sorted(plateaus):
        if j < 1 or m >= len(labels) or m < j:
            raise InvalidUniverse({"plateaus": f"Plateau ({j}, {m}) is outside the label grid"})
        if j <= previous_end + 1:
            raise InvalidUniverse({"plateaus": "Plateaus must be separated by at least one label"})
        regions.append((int(round(labels[j - 1] * n)), int(round(labels[m] * n))))
        previous_end = m
    return regions


def pre_divergence_staircase(
    n: int,
    labels: QuantileLabels,
    plateaus: Sequence[Tuple[int, int]],
    law=None,
    seed: int = 0,
    t: int = 0,
    t_app: int = 1,
) -> CoupledUniverse:
    """
    A pre-divergence week whose outcomes tie across whole label plateaus.

    Both scenarios share one law, so matched values are equal. Partners are
    shuffled only inside the tied ranks of each plateau.
    """
    law = law or AffineLaw()
    regions = plateau_regions(n, labels, plateaus)
    values = np.maximum.accumulate(law.transform((np.arange(n) + 0.5) / n))
    for start, stop in regions:
        values[start:stop] = values[stop - 1]
    universe = CoupledUniverse(values, values, np.arange(n), t, t_app)
    rng = np.random.default_rng(seed)
    for start, stop in regions:
        universe = inject_violation(
            universe, stop - start - 1, seed=int(rng.integers(2 ** 32)), regions=[(start, stop)]
        )
    logger.debug("Staircase with plateaus %s over rank regions %s", list(plateaus), regions)
    return universe
