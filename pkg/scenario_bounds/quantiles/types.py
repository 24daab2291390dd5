"""
Value types shared by every app: quantile labels and series, scenario pairs,
violation parameters, Monte Carlo bound samples and confidence intervals.

Everything here is immutable once built.
"""
import enum
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, Tuple

import numpy as np

from scenario_bounds.utils.exceptions import (
    IndexOutOfRange,
    InvalidLabels,
    InvalidViolation,
    InvariantViolation,
    LabelMismatch,
    LengthMismatch,
    NonFiniteValue,
    NonMonotoneValues,
    ScenarioBoundsError,
)

HUB_QUANTILE_LABELS = (
    (0.01, 0.025)
    + tuple(round(0.05 * k, 2) for k in range(1, 20))
    + (0.975, 0.99)
)


@dataclass(frozen=True)
class QuantileLabels:
    """Strictly increasing probabilities in the open interval (0, 1)."""

    values: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 2:
            raise InvalidLabels({"labels": "At least two quantile labels are required"})
        for label in values:
            if not 0.0 < label < 1.0:
                raise InvalidLabels({"labels": f"Label {label!r} is outside (0, 1)"})
        for previous, current in zip(values, values[1:]):
            if current <= previous:
                raise InvalidLabels(
                    {"labels": f"Labels must be strictly increasing ({previous} >= {current})"}
                )

    @classmethod
    def hub(cls) -> "QuantileLabels":
        return cls(HUB_QUANTILE_LABELS)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, index):
        return self.values[index]

    @property
    def array(self) -> np.ndarray:
        array = np.asarray(self.values, dtype=float)
        array.setflags(write=False)
        return array

    @property
    def low(self) -> float:
        return self.values[0]

    @property
    def high(self) -> float:
        return self.values[-1]


def uniform_labels(count: int, low: float = 0.01, high: float = 0.99) -> QuantileLabels:
    """Evenly spaced label grid from ``low`` to ``high`` inclusive."""
    if count < 2:
        raise InvalidLabels({"count": "At least two quantile labels are required"})
    return QuantileLabels(tuple(float(v) for v in np.linspace(low, high, count)))


@dataclass(frozen=True)
class QuantileSeries:
    labels: QuantileLabels
    values: Tuple[float, ...]
    has_ties: bool = field(init=False, default=False)

    def __post_init__(self):
        if len(self.values) != len(self.labels):
            raise LengthMismatch(
                {
                    "values": f"Expected {len(self.labels)} values to match the labels, "
                    f"got {len(self.values)}"
                }
            )
        values = tuple(float(v) for v in self.values)
        for index, value in enumerate(values):
            if not math.isfinite(value):
                raise NonFiniteValue(
                    {"values": f"Value at quantile {self.labels[index]} is not finite"},
                    index=index,
                )
        for index in range(1, len(values)):
            if values[index] < values[index - 1]:
                raise NonMonotoneValues(
                    {
                        "values": f"Value decreases between quantiles {self.labels[index - 1]} "
                        f"and {self.labels[index]}"
                    },
                    index=index,
                )
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self, "has_ties", any(a == b for a, b in zip(values, values[1:]))
        )

    def __len__(self) -> int:
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        array = np.asarray(self.values, dtype=float)
        array.setflags(write=False)
        return array


def validate_series(labels, values: Iterable[Any]) -> QuantileSeries:
    if not isinstance(labels, QuantileLabels):
        labels = QuantileLabels(tuple(labels))
    try:
        raw = tuple(float(v) for v in values)
    except (TypeError, ValueError):
        raise NonFiniteValue({"values": "Every value must be a real number"})
    return QuantileSeries(labels, raw)


@dataclass(frozen=True)
class PairMeta:
    model_id: str = ""
    target: str = ""
    location: str = ""
    t: int = 0
    t_app: int = 0

    def __post_init__(self):
        if self.t < 0 or self.t_app < 0:
            raise ScenarioBoundsError({"t": "Week indices must be non-negative"})


@dataclass(frozen=True)
class ScenarioPair:
    """
    Two scenario projections of the same (model, target, location, week).

    ``x`` and ``y`` keep the caller's order: the difference studied is always X - Y.
    """

    x: QuantileSeries
    y: QuantileSeries
    meta: PairMeta = field(default_factory=PairMeta)

    def __post_init__(self):
        if self.x.labels != self.y.labels:
            raise LabelMismatch({"labels": "Both scenarios must share the same quantile labels"})

    @property
    def labels(self) -> QuantileLabels:
        return self.x.labels

    @property
    def is_pre_divergence(self) -> bool:
        return self.meta.t < self.meta.t_app

    def as_dict(self) -> Dict[str, Any]:
        return {
            "labels": list(self.labels.values),
            "x": list(self.x.values),
            "y": list(self.y.values),
            "meta": {
                "model_id": self.meta.model_id,
                "target": self.meta.target,
                "location": self.meta.location,
                "t": self.meta.t,
                "t_app": self.meta.t_app,
            },
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScenarioPair":
        labels = QuantileLabels(tuple(data["labels"]))
        return cls(
            x=validate_series(labels, data["x"]),
            y=validate_series(labels, data["y"]),
            meta=PairMeta(**data.get("meta", {})),
        )


def make_pair(labels, x_values, y_values, **meta) -> ScenarioPair:
    if not isinstance(labels, QuantileLabels):
        labels = QuantileLabels(tuple(labels))
    return ScenarioPair(
        validate_series(labels, x_values), validate_series(labels, y_values), PairMeta(**meta)
    )


class ProvenanceEnum(enum.Enum):
    ESTIMATED = "estimated"
    INTERPOLATED = "interpolated"
    USER_SUPPLIED = "user-supplied"
    ORACLE = "oracle"


ProvenanceChoices = [(e.value, e.name) for e in ProvenanceEnum]


@dataclass(frozen=True)
class ViolationParams:
    eps_l: float = 0.0
    eps_u: float = 0.0
    provenance: ProvenanceEnum = ProvenanceEnum.USER_SUPPLIED

    def __post_init__(self):
        for name in ("eps_l", "eps_u"):
            value = float(getattr(self, name))
            if not (0.0 <= value <= 1.0):
                raise InvalidViolation({name: f"Must lie in [0, 1], got {value}"})
            object.__setattr__(self, name, value)
        object.__setattr__(self, "provenance", ProvenanceEnum(self.provenance))

    @classmethod
    def zero(cls, provenance=ProvenanceEnum.USER_SUPPLIED) -> "ViolationParams":
        return cls(0.0, 0.0, provenance)

    @classmethod
    def clamped(cls, eps_l: float, eps_u: float, provenance) -> "ViolationParams":
        return cls(min(max(eps_l, 0.0), 1.0), min(max(eps_u, 0.0), 1.0), provenance)

    @property
    def is_zero(self) -> bool:
        return self.eps_l == 0.0 and self.eps_u == 0.0

    def dominates(self, other: "ViolationParams", tolerance: float = 0.0) -> bool:
        return (
            self.eps_l + tolerance >= other.eps_l
            and self.eps_u + tolerance >= other.eps_u
        )

    def widened(self, delta: float) -> "ViolationParams":
        return ViolationParams.clamped(self.eps_l + delta, self.eps_u + delta, self.provenance)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "eps_l": self.eps_l,
            "eps_u": self.eps_u,
            "provenance": self.provenance.value,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ViolationParams":
        return cls(data["eps_l"], data["eps_u"], ProvenanceEnum(data["provenance"]))


@dataclass(frozen=True, eq=False)
class BoundSamples:
    """
    Paired draws of the upper and lower bound variables.

    Entry ``k`` of both arrays comes from the same uniform draw, so
    ``z_lower[k] <= z_upper[k]`` always holds.
    """

    z_upper: np.ndarray
    z_lower: np.ndarray
    seed: int

    def __post_init__(self):
        z_upper = np.array(self.z_upper, dtype=float)
        z_lower = np.array(self.z_lower, dtype=float)
        if z_upper.shape != z_lower.shape or z_upper.ndim != 1:
            raise InvariantViolation(
                f"Bound arrays differ in shape: {z_upper.shape} vs {z_lower.shape}"
            )
        crossed = np.flatnonzero(z_lower > z_upper)
        if crossed.size:
            raise InvariantViolation(
                f"z_lower exceeds z_upper at {crossed.size} draws (first at index {crossed[0]})"
            )
        z_upper.setflags(write=False)
        z_lower.setflags(write=False)
        object.__setattr__(self, "z_upper", z_upper)
        object.__setattr__(self, "z_lower", z_lower)

    @property
    def n_samples(self) -> int:
        return int(self.z_upper.size)

    @property
    def widths(self) -> np.ndarray:
        return self.z_upper - self.z_lower

    def identical_to(self, other: "BoundSamples") -> bool:
        return (
            self.seed == other.seed
            and np.array_equal(self.z_upper, other.z_upper)
            and np.array_equal(self.z_lower, other.z_lower)
        )


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    alpha: float
    tail_split: Tuple[float, float]
    certificate: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise InvariantViolation(f"Interval is inverted: [{self.lower}, {self.upper}]")
        p_low, p_high = self.tail_split
        if p_high - p_low < self.alpha - 1e-9:
            raise InvariantViolation(
                f"Tail split {self.tail_split} is narrower than alpha={self.alpha}"
            )
        if self.certificate < self.alpha - 1e-9:
            raise InvariantViolation(
                f"Certificate {self.certificate} is below alpha={self.alpha}"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, other: "ConfidenceInterval") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper

    def as_dict(self) -> Dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "alpha": self.alpha,
            "p_low": self.tail_split[0],
            "p_high": self.tail_split[1],
            "certificate": self.certificate,
        }


def pointwise_upper_role(
    x: QuantileSeries, y: QuantileSeries, i: int
) -> Tuple[QuantileSeries, QuantileSeries]:
    """Return ``(upper, lower)`` at quantile index ``i``; a tie keeps ``x`` on top."""
    if x.labels != y.labels:
        raise LabelMismatch({"labels": "Both series must share the same quantile labels"})
    if not 0 <= i < len(x):
        raise IndexOutOfRange({"i": f"Index {i} is outside [0, {len(x) - 1}]"})
    if x.values[i] >= y.values[i]:
        return x, y
    return y, x

