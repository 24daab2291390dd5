"""
Estimating how far a model strays from rank-aligned matching.

``estimate_epsilon`` reads the violation off the reported quantiles of the weeks
before the scenarios diverge. ``approx_epsilon`` measures the same thing on PCHIP
interpolated CDFs and is never larger than the estimate.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from scenario_bounds.quantiles.interpolation import (
    build_cdf_interpolant,
    evaluate,
    value_range,
)
from scenario_bounds.quantiles.types import (
    ProvenanceEnum,
    ScenarioPair,
    ViolationParams,
    pointwise_upper_role,
)
from scenario_bounds.utils.exceptions import (
    EmptyInput,
    LabelMismatch,
    PostDivergenceWeek,
    ScenarioBoundsError,
)

logger = logging.getLogger(__name__)

MIN_GRID_POINTS = 101


class ReadingEnum(enum.Enum):
    CONSERVATIVE = "conservative"
    LITERAL = "literal"


ReadingChoices = [(e.value, e.name) for e in ReadingEnum]


class Contribution(NamedTuple):
    t: int
    index: int
    eps_u: float
    eps_l: float


@dataclass(frozen=True)
class EpsilonTrace:
    contributions: Tuple[Contribution, ...]
    final: ViolationParams

    def weekly_maxima(self) -> Dict[int, Tuple[float, float]]:
        """Per week ``(eps_l, eps_u)`` maxima, ordered by week."""
        weeks: Dict[int, Tuple[float, float]] = {}
        for item in self.contributions:
            eps_l, eps_u = weeks.get(item.t, (0.0, 0.0))
            weeks[item.t] = (max(eps_l, item.eps_l), max(eps_u, item.eps_u))
        return dict(sorted(weeks.items()))


def _check_pre_divergence(pairs: Sequence[ScenarioPair]):
    if not pairs:
        raise EmptyInput({"pairs": "At least one pre-divergence week is required"})
    labels = pairs[0].labels
    for pair in pairs:
        if pair.labels != labels:
            raise LabelMismatch(
                {"labels": f"Week {pair.meta.t} uses a different quantile label set"},
                week=pair.meta.t,
            )
        if not pair.is_pre_divergence:
            raise PostDivergenceWeek(
                {
                    "pairs": f"Week {pair.meta.t} is not before the divergence week "
                    f"{pair.meta.t_app}"
                },
                week=pair.meta.t,
            )


def _week_contributions(pair: ScenarioPair, reading: ReadingEnum) -> List[Contribution]:
    q = pair.labels.array
    n = len(q)
    rows = []
    for i in range(n):
        upper, lower = pointwise_upper_role(pair.x, pair.y, i)
        u = upper.array
        l = lower.array  # noqa: E741
        eps_u = eps_l = 0.0

        if i - 1 >= 0:
            if reading is ReadingEnum.CONSERVATIVE:
                candidates = np.flatnonzero(u[:i] >= l[i - 1])
                if candidates.size:
                    eps_u = q[i] - q[candidates[0]]
            else:
                candidates = np.flatnonzero(u[: i + 1] >= l[i - 1])
                if candidates.size:
                    eps_u = q[i] - q[candidates[-1]]

        if i + 1 <= n - 1:
            if reading is ReadingEnum.CONSERVATIVE:
                candidates = np.flatnonzero(l[i + 1 :] <= u[i + 1]) + i + 1
                if candidates.size:
                    eps_l = q[candidates[-1]] - q[i]
            else:
                candidates = np.flatnonzero(l[i:] >= u[i + 1]) + i
                if candidates.size:
                    eps_l = q[candidates[0]] - q[i]

        rows.append(Contribution(pair.meta.t, i, float(eps_u), float(eps_l)))
    return rows


def estimate_epsilon(
    pairs: Sequence[ScenarioPair], reading=ReadingEnum.CONSERVATIVE
) -> EpsilonTrace:
    reading = ReadingEnum(reading)
    _check_pre_divergence(pairs)

    contributions: List[Contribution] = []
    for pair in pairs:
        week = _week_contributions(pair, reading)
        logger.debug(
            "Week %s: eps_u=%.4f eps_l=%.4f",
            pair.meta.t,
            max(c.eps_u for c in week),
            max(c.eps_l for c in week),
        )
        contributions.extend(week)

    final = ViolationParams.clamped(
        max(c.eps_l for c in contributions),
        max(c.eps_u for c in contributions),
        ProvenanceEnum.ESTIMATED,
    )
    logger.info(
        "Estimated violation over %d weeks: eps_l=%.4f eps_u=%.4f (%s reading)",
        len(pairs),
        final.eps_l,
        final.eps_u,
        reading.value,
    )
    return EpsilonTrace(tuple(contributions), final)


def _week_cdf_differences(
    pair: ScenarioPair, grid_points: int, strict: bool
) -> np.ndarray:
    upper, lower = pointwise_upper_role(pair.x, pair.y, len(pair.labels) // 2)
    grid = value_range(upper, lower, points=grid_points)
    f_upper = build_cdf_interpolant(upper, strict=strict)
    f_lower = build_cdf_interpolant(lower, strict=strict)
    return evaluate(f_lower, grid) - evaluate(f_upper, grid)


def approx_epsilon_by_week(
    pairs: Sequence[ScenarioPair], grid_points: int = 1001, strict: bool = False
) -> List[Tuple[int, ViolationParams]]:
    if grid_points < MIN_GRID_POINTS:
        raise ScenarioBoundsError(
            {"grid_points": f"Must be at least {MIN_GRID_POINTS}, got {grid_points}"}
        )
    _check_pre_divergence(pairs)

    weeks = []
    for pair in pairs:
        differences = _week_cdf_differences(pair, grid_points, strict)
        raw_l = max(-float(differences.min()), 0.0)
        raw_u = max(float(differences.max()), 0.0)

        # Interpolated CDFs overshoot the knots on crossing series; each week
        # stays under its own estimate.
        estimate = _week_contributions(pair, ReadingEnum.CONSERVATIVE)
        cap_l = max(c.eps_l for c in estimate)
        cap_u = max(c.eps_u for c in estimate)
        if raw_l > cap_l or raw_u > cap_u:
            logger.debug(
                "Week %s: approximation (%.4f, %.4f) capped at estimate (%.4f, %.4f)",
                pair.meta.t,
                raw_l,
                raw_u,
                cap_l,
                cap_u,
            )
        params = ViolationParams.clamped(
            min(raw_l, cap_l), min(raw_u, cap_u), ProvenanceEnum.INTERPOLATED
        )
        logger.debug(
            "Week %s: approximated eps_l=%.4f eps_u=%.4f",
            pair.meta.t,
            params.eps_l,
            params.eps_u,
        )
        weeks.append((pair.meta.t, params))
    return weeks


def approx_epsilon(
    pairs: Sequence[ScenarioPair], grid_points: int = 1001, strict: bool = False
) -> ViolationParams:
    weeks = approx_epsilon_by_week(pairs, grid_points=grid_points, strict=strict)
    return ViolationParams(
        max(params.eps_l for _, params in weeks),
        max(params.eps_u for _, params in weeks),
        ProvenanceEnum.INTERPOLATED,
    )
