import io
import json

import pytest
from django.core.management import call_command

from scenario_bounds.quantiles.types import QuantileLabels, make_pair

TOY_LABELS = (0.1, 0.3, 0.5, 0.7, 0.9)


@pytest.fixture
def toy_labels() -> QuantileLabels:
    return QuantileLabels(TOY_LABELS)


@pytest.fixture
def hub_labels() -> QuantileLabels:
    return QuantileLabels.hub()


@pytest.fixture
def shifted_pair(toy_labels):
    """X sits one label step above Y on the toy grid."""
    return make_pair(toy_labels, (10, 20, 30, 40, 50), (0, 10, 20, 30, 40), t=0, t_app=1)


@pytest.fixture
def identical_pair(toy_labels):
    return make_pair(toy_labels, (0, 10, 20, 30, 40), (0, 10, 20, 30, 40), t=0, t_app=1)


SIMULATION_SPEC = {
    "n": 2000,
    "weeks": 4,
    "t_app": 2,
    "seed": 3,
    "window": 40,
    "target": "inc case",
    "location": "06",
}


@pytest.fixture
def simulated_submission(tmp_path, db):
    """Hub CSV of the oracle model: scenarios B and A, four weeks, divergence at week 2."""
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps(SIMULATION_SPEC))
    output = tmp_path / "submission.csv"
    call_command("simulate", str(spec), str(output), stdout=io.StringIO())
    return output
