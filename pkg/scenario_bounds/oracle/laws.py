"""
Non-decreasing transforms of a shared latent draw.

Each law maps latent values to outcome values. Uniform and Gaussian laws expect
latent values in (0, 1); affine and piecewise-linear laws accept any real.
"""
from dataclasses import asdict, dataclass
from typing import Any, ClassVar, Dict, Tuple, Type

import numpy as np
from scipy.stats import norm

from scenario_bounds.utils.exceptions import InvalidUniverse

LATENT_EPSILON = 1e-12


@dataclass(frozen=True)
class AffineLaw:
    kind: ClassVar[str] = "affine"

    shift: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.scale < 0:
            raise InvalidUniverse({"scale": "Must be non-negative to keep the law monotone"})

    def transform(self, w):
        return self.shift + self.scale * np.asarray(w, dtype=float)


@dataclass(frozen=True)
class UniformLaw:
    kind: ClassVar[str] = "uniform"

    low: float = 0.0
    high: float = 1.0

    def __post_init__(self):
        if self.high < self.low:
            raise InvalidUniverse({"high": "Must not be below low"})

    def transform(self, w):
        return self.low + (self.high - self.low) * np.asarray(w, dtype=float)


@dataclass(frozen=True)
class GaussianLaw:
    kind: ClassVar[str] = "gaussian"

    mean: float = 0.0
    std: float = 1.0

    def __post_init__(self):
        if self.std < 0:
            raise InvalidUniverse({"std": "Must be non-negative"})

    def transform(self, w):
        w = np.clip(np.asarray(w, dtype=float), LATENT_EPSILON, 1.0 - LATENT_EPSILON)
        return self.mean + self.std * norm.ppf(w)


@dataclass(frozen=True)
class PiecewiseLinearLaw:
    """Linear interpolation through ``(points_w, points_v)``, flat outside the points."""

    kind: ClassVar[str] = "piecewise-linear"

    points_w: Tuple[float, ...]
    points_v: Tuple[float, ...]

    def __post_init__(self):
        w = np.asarray(self.points_w, dtype=float)
        v = np.asarray(self.points_v, dtype=float)
        if w.size < 2 or w.size != v.size:
            raise InvalidUniverse(
                {"points": "Need at least two points and as many values as latent points"}
            )
        if np.any(np.diff(w) <= 0):
            raise InvalidUniverse({"points_w": "Must be strictly increasing"})
        if np.any(np.diff(v) < 0):
            raise InvalidUniverse({"points_v": "Must be non-decreasing"})
        object.__setattr__(self, "points_w", tuple(float(p) for p in w))
        object.__setattr__(self, "points_v", tuple(float(p) for p in v))

    def transform(self, w):
        return np.interp(np.asarray(w, dtype=float), self.points_w, self.points_v)


LAWS: Dict[str, Type] = {
    law.kind: law for law in (AffineLaw, UniformLaw, GaussianLaw, PiecewiseLinearLaw)
}


def law_from_dict(data: Dict[str, Any]):
    data = dict(data)
    kind = data.pop("kind", None)
    if kind not in LAWS:
        raise InvalidUniverse({"kind": f"Unknown law {kind!r}; expected one of {sorted(LAWS)}"})
    try:
        return LAWS[kind](**data)
    except TypeError as error:
        raise InvalidUniverse({kind: str(error)})


def law_as_dict(law) -> Dict[str, Any]:
    data = {"kind": law.kind}
    data.update(asdict(law))
    return data
