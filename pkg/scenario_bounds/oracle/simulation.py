"""Hub fixtures generated from synthetic universes with a known violation."""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List

from scenario_bounds.hub.submissions import SubmissionRecord, pair_records
from scenario_bounds.oracle.laws import law_as_dict
from scenario_bounds.oracle.universe import (
    CoupledUniverse,
    quantize,
    true_epsilon,
    weekly_universes,
)
from scenario_bounds.quantiles.types import ProvenanceEnum, ScenarioPair, ViolationParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimulationResult:
    universes: List[CoupledUniverse]
    pairs: List[ScenarioPair]
    records: List[SubmissionRecord]
    true_epsilon: ViolationParams


def simulate(spec: Dict[str, Any]) -> SimulationResult:
    """Run a validated ``SimulationSpecSerializer`` payload."""
    universes = weekly_universes(
        spec["n"],
        spec["weeks"],
        spec["t_app"],
        spec["x_law"],
        spec["y_law"],
        seed=spec["seed"],
        window=spec["window"],
        growth=spec["growth"],
        latent=spec["latent"],
        extremal=spec["extremal"],
    )
    pairs = [
        quantize(universe, spec["labels"], spec["model_id"], spec["target"], spec["location"])
        for universe in universes
    ]
    records = [
        record
        for pair in pairs
        for record in pair_records(pair, spec["scenario_x"], spec["scenario_y"])
    ]
    truths = [true_epsilon(universe) for universe in universes]
    truth = ViolationParams(
        eps_l=max(t.eps_l for t in truths),
        eps_u=max(t.eps_u for t in truths),
        provenance=ProvenanceEnum.ORACLE,
    )
    logger.info(
        "Simulated %d weeks of %d outcomes, true violation (%.4f, %.4f)",
        len(universes),
        spec["n"],
        truth.eps_l,
        truth.eps_u,
    )
    return SimulationResult(universes, pairs, records, truth)


def spec_as_dict(spec: Dict[str, Any]) -> Dict[str, Any]:
    """JSON-ready copy of a validated spec, for manifests."""
    data = dict(spec)
    data["labels"] = list(spec["labels"].values)
    data["x_law"] = law_as_dict(spec["x_law"])
    data["y_law"] = law_as_dict(spec["y_law"])
    return data
