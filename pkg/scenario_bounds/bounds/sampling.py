"""
Monte Carlo sampling of the upper and lower bound variables of X - Y.

Every draw index ``k`` maps to one uniform number that depends only on
``(seed, k)``: indices are grouped in blocks of ``shard_size`` and block ``b``
is generated by ``PCG64(SeedSequence([seed, b]))``. Any split of the index
range across workers therefore reproduces the single-process result exactly.
"""
import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np
from django.conf import settings

from scenario_bounds.quantiles.interpolation import build_quantile_interpolant, evaluate
from scenario_bounds.quantiles.types import BoundSamples, ScenarioPair, ViolationParams
from scenario_bounds.utils.exceptions import InvalidBoundConfig

logger = logging.getLogger(__name__)

PRNG_NAME = "numpy.random.PCG64/SeedSequence(seed, block)"


class MethodEnum(enum.Enum):
    QUANTILE_GRID = "quantile-grid"
    INTERPOLATED = "interpolated"


MethodChoices = [(e.value, e.name) for e in MethodEnum]


@dataclass(frozen=True)
class BoundConfig:
    n_samples: int = 100000
    seed: int = 0
    method: MethodEnum = MethodEnum.QUANTILE_GRID
    violation: ViolationParams = field(default_factory=ViolationParams.zero)
    shard_size: int = 65536

    def __post_init__(self):
        object.__setattr__(self, "method", MethodEnum(self.method))
        if self.n_samples < 1:
            raise InvalidBoundConfig({"n_samples": "Must be at least 1"})
        if self.shard_size < 1:
            raise InvalidBoundConfig({"shard_size": "Must be at least 1"})
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidBoundConfig({"seed": "Must be an unsigned 64-bit integer"})

    @classmethod
    def from_settings(cls, **overrides) -> "BoundConfig":
        values = {
            "n_samples": settings.SCENARIO_BOUNDS_N_SAMPLES,
            "seed": settings.SCENARIO_BOUNDS_SEED,
            "shard_size": settings.SCENARIO_BOUNDS_SHARD_SIZE,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_violation(self, violation: ViolationParams) -> "BoundConfig":
        return replace(self, violation=violation)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "n_samples": self.n_samples,
            "seed": self.seed,
            "method": self.method.value,
            "violation": self.violation.as_dict(),
            "shard_size": self.shard_size,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoundConfig":
        return cls(
            n_samples=data["n_samples"],
            seed=data["seed"],
            method=MethodEnum(data["method"]),
            violation=ViolationParams.from_dict(data["violation"]),
            shard_size=data["shard_size"],
        )


def draw_uniforms(seed: int, start: int, stop: int, shard_size: int = 65536) -> np.ndarray:
    """Uniform draws for indices ``start <= k < stop``."""
    if stop <= start:
        return np.empty(0)
    chunks = []
    first_block, last_block = start // shard_size, (stop - 1) // shard_size
    for block in range(first_block, last_block + 1):
        generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))
        values = generator.random(shard_size)
        offset = block * shard_size
        chunks.append(values[max(start - offset, 0) : min(stop - offset, shard_size)])
    return np.concatenate(chunks)


def _grid_bounds(pair: ScenarioPair, violation: ViolationParams, u: np.ndarray):
    q = pair.labels.array
    x, y = pair.x.array, pair.y.array
    q_min, q_max = q[0], q[-1]

    u = np.clip(u, q_min, q_max)
    u_low = np.maximum(u - violation.eps_l, q_min)
    u_high = np.minimum(u + violation.eps_u, q_max)
    # largest label <= u_low, smallest label >= u_high
    low = np.searchsorted(q, u_low, side="right") - 1
    high = np.searchsorted(q, u_high, side="left")

    return x[high] - y[low], x[low] - y[high]


def _interp_bounds(pair: ScenarioPair, violation: ViolationParams, u: np.ndarray):
    q_min, q_max = pair.labels.low, pair.labels.high
    quantile_x = build_quantile_interpolant(pair.x)
    quantile_y = build_quantile_interpolant(pair.y)

    q_low = np.clip(u - violation.eps_l, q_min, q_max)
    q_high = np.clip(u + violation.eps_u, q_min, q_max)
    x_low = evaluate(quantile_x, q_low)
    y_low = evaluate(quantile_y, q_low)
    x_high = np.maximum(evaluate(quantile_x, q_high), x_low)
    y_high = np.maximum(evaluate(quantile_y, q_high), y_low)

    return x_high - y_low, x_low - y_high


_BOUNDERS: Dict[MethodEnum, Callable] = {
    MethodEnum.QUANTILE_GRID: _grid_bounds,
    MethodEnum.INTERPOLATED: _interp_bounds,
}


def sample_range(
    pair: ScenarioPair, cfg: BoundConfig, start: int, stop: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Bound draws for indices ``start <= k < stop`` of the configured method."""
    u = draw_uniforms(cfg.seed, start, stop, cfg.shard_size)
    return _BOUNDERS[cfg.method](pair, cfg.violation, u)


def sample_bounds_grid(pair: ScenarioPair, cfg: BoundConfig) -> BoundSamples:
    if cfg.method is not MethodEnum.QUANTILE_GRID:
        cfg = replace(cfg, method=MethodEnum.QUANTILE_GRID)
    z_upper, z_lower = sample_range(pair, cfg, 0, cfg.n_samples)
    return BoundSamples(z_upper, z_lower, cfg.seed)


def sample_bounds_interp(pair: ScenarioPair, cfg: BoundConfig) -> BoundSamples:
    if cfg.method is not MethodEnum.INTERPOLATED:
        cfg = replace(cfg, method=MethodEnum.INTERPOLATED)
    z_upper, z_lower = sample_range(pair, cfg, 0, cfg.n_samples)
    return BoundSamples(z_upper, z_lower, cfg.seed)


def shard_ranges(n_samples: int, shards: int) -> List[Tuple[int, int]]:
    shards = max(1, min(shards, n_samples))
    step = math.ceil(n_samples / shards)
    return [(start, min(start + step, n_samples)) for start in range(0, n_samples, step)]


def sample_bounds(pair: ScenarioPair, cfg: BoundConfig, shards: int = 1) -> BoundSamples:
    """
    Draw ``cfg.n_samples`` bound pairs with the method named by ``cfg.method``.

    With ``shards > 1`` the index range is split into contiguous blocks that run as
    a Celery group. The result is identical for every shard count.
    """
    if shards <= 1:
        z_upper, z_lower = sample_range(pair, cfg, 0, cfg.n_samples)
        return BoundSamples(z_upper, z_lower, cfg.seed)

    from celery import group

    from scenario_bounds.bounds.tasks import sample_bounds_shard

    pair_data, cfg_data = pair.as_dict(), cfg.as_dict()
    ranges = shard_ranges(cfg.n_samples, shards)
    logger.info("Sampling %d draws in %d shards", cfg.n_samples, len(ranges))
    job = group(
        sample_bounds_shard.s(pair_data, cfg_data, start, stop) for start, stop in ranges
    )
    parts = job.apply_async().get()
    z_upper = np.concatenate([np.asarray(part["z_upper"], dtype=float) for part in parts])
    z_lower = np.concatenate([np.asarray(part["z_lower"], dtype=float) for part in parts])
    return BoundSamples(z_upper, z_lower, cfg.seed)


class ProbeRow(NamedTuple):
    label_count: int
    mean_width: float
    stderr: float


def width_convergence_probe(
    pair_generator: Callable[[int], ScenarioPair],
    label_counts: Iterable[int],
    cfg: Optional[BoundConfig] = None,
) -> List[ProbeRow]:
    """
    Mean ``z_upper - z_lower`` for the same distribution quantized at each label count.

    ``pair_generator(m)`` must return the pair reported on ``m`` labels.
    """
    cfg = cfg or BoundConfig.from_settings()
    rows = []
    for count in label_counts:
        widths = sample_bounds(pair_generator(count), cfg).widths
        stderr = float(widths.std(ddof=1) / math.sqrt(widths.size)) if widths.size > 1 else 0.0
        rows.append(ProbeRow(count, float(widths.mean()), stderr))
        logger.debug("Probe with %d labels: mean width %.6g", count, rows[-1].mean_width)
    return rows
