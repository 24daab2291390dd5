import io
import random

import pytest

from scenario_bounds.hub.submissions import (
    RowTypeEnum,
    SubmissionRecord,
    assemble_pairs,
    emit_submission,
    parse_submission,
)
from scenario_bounds.quantiles.types import QuantileLabels
from scenario_bounds.utils.exceptions import (
    BadEncoding,
    BadNumber,
    DuplicateQuantileRow,
    EmptyFile,
    IncompleteQuantileSet,
    MissingColumn,
    ScenarioBoundsError,
    ScenarioMissing,
)

HEADER = "scenario_id,target,location,type,quantile,value,horizon"
SCENARIO_A = "A-2021-11-09"
SCENARIO_B = "B-2021-11-09"


def submission_text(weeks=4, labels=None, skip=(), model=None):
    labels = labels or QuantileLabels.hub()
    header = HEADER if model is None else "model," + HEADER
    lines = [header]
    for scenario, scale in ((SCENARIO_A, 1000.0), (SCENARIO_B, 1200.0)):
        for week in range(1, weeks + 1):
            for q in labels:
                if (scenario, week, q) in skip:
                    continue
                row = f"{scenario},inc case,06,quantile,{q},{scale * q + 10 * week},{week}"
                lines.append(row if model is None else f"{model},{row}")
            point = f"{scenario},inc case,06,point,NA,{scale * 0.5 + 10 * week},{week}"
            lines.append(point if model is None else f"{model},{point}")
    return "\n".join(lines) + "\n"


@pytest.fixture
def records():
    return parse_submission(io.StringIO(submission_text()), model_id="model-a")


def test_parses_a_hub_row():
    parsed = parse_submission(f"{HEADER}\nB-2021-11-09,inc case,06,quantile,0.5,1234.0,1\n")
    assert parsed == [
        SubmissionRecord(
            model_id="",
            scenario_id="B-2021-11-09",
            target="inc case",
            horizon_week=1,
            location="06",
            row_type=RowTypeEnum.QUANTILE,
            quantile=0.5,
            value=1234.0,
            line=2,
        )
    ]
    assert parsed[0].week == 0


def test_point_rows_are_kept_without_a_quantile(records):
    points = [record for record in records if record.row_type is RowTypeEnum.POINT]
    assert len(points) == 8
    assert all(record.quantile is None for record in points)
    assert len(records) == 2 * 4 * 24


def test_out_of_range_quantile_reports_its_line():
    text = f"# round 9\n{HEADER}\nA,inc case,US,quantile,0.5,1.0,1\nA,inc case,US,quantile,1.5,2.0,1\n"
    with pytest.raises(BadNumber) as info:
        parse_submission(text)
    assert info.value.line == 4
    assert "1.5" in info.value.describe()


@pytest.mark.parametrize("value", ["abc", "inf", ""])
def test_bad_values(value):
    with pytest.raises(BadNumber):
        parse_submission(f"{HEADER}\nA,inc case,US,quantile,0.5,{value},1\n")


def test_lenient_mode_skips_bad_rows():
    text = f"{HEADER}\nA,inc case,US,quantile,0.5,1.0,1\nA,inc case,US,quantile,0.6,oops,1\n"
    skipped = []
    parsed = parse_submission(text, lenient=True, skipped=skipped)
    assert len(parsed) == 1
    assert [line for line, _ in skipped] == [3]


@pytest.mark.parametrize(
    "row, found",
    [
        ("B,inc case,06,quantile,0.5,1234.0,1,EXTRA", 8),
        ("B,inc case,06,quantile,0.5,1234.0", 6),
    ],
)
def test_rows_with_the_wrong_field_count(row, found):
    text = f"{HEADER}\nB,inc case,06,quantile,0.4,1000.0,1\n{row}\n"
    with pytest.raises(BadNumber) as info:
        parse_submission(io.BytesIO(text.encode()))
    assert info.value.line == 3
    assert f"expected 7 fields, found {found}" in info.value.describe()

    skipped = []
    parsed = parse_submission(text, lenient=True, skipped=skipped)
    assert [record.quantile for record in parsed] == [0.4]
    assert [line for line, _ in skipped] == [3]


def test_lenient_mode_reports_skipped_rows_in_file_order():
    text = (
        f"{HEADER}\n"
        "A,inc case,US,quantile,0.5,oops,1\n"
        "A,inc case,US,quantile,0.6,1.0\n"
        "A,inc case,US,quantile,0.7,2.0,1\n"
        "A,inc case,US,quantile,0.8,3.0,1,9\n"
    )
    skipped = []
    parsed = parse_submission(text, lenient=True, skipped=skipped)
    assert [record.quantile for record in parsed] == [0.7]
    assert [line for line, _ in skipped] == [2, 3, 5]


def test_invalid_utf8_is_an_input_error():
    text = f"{HEADER}\nB,inc case,".encode() + b"\xff\xfe" + b",quantile,0.5,1234.0,1\n"
    with pytest.raises(BadEncoding) as info:
        parse_submission(io.BytesIO(text))
    assert info.value.line == 2
    assert info.value.offset == len(HEADER) + 1 + len("B,inc case,")
    assert isinstance(info.value, ScenarioBoundsError)


def test_missing_columns():
    with pytest.raises(MissingColumn) as info:
        parse_submission("scenario_id,target,location,type,quantile\nA,inc case,US,quantile,0.5\n")
    message = info.value.describe()
    assert "value" in message and "horizon or target_week_end_date" in message


@pytest.mark.parametrize("text", ["", "# only a comment\n", f"{HEADER}\n", f"\n{HEADER}\n\n"])
def test_empty_files(text):
    with pytest.raises(EmptyFile):
        parse_submission(text)


def test_week_end_dates_are_ranked_per_scenario():
    text = (
        "scenario_id,target,location,type,quantile,value,target_week_end_date\n"
        "A,inc case,US,quantile,0.5,3.0,2021-11-27\n"
        "A,inc case,US,quantile,0.5,1.0,2021-11-13\n"
        "B,inc case,US,quantile,0.5,9.0,2021-11-20\n"
        "A,inc case,US,quantile,0.5,2.0,2021-11-20\n"
    )
    parsed = parse_submission(text, model_id="m")
    assert [(r.scenario_id, r.horizon_week) for r in parsed] == [
        ("A", 3),
        ("A", 1),
        ("B", 1),
        ("A", 2),
    ]
    assert {r.model_id for r in parsed} == {"m"}


def test_column_map_renames_file_columns():
    text = "scenario_name,target,location,type,quantile,value,week\nA,inc case,US,quantile,0.5,1.0,2\n"
    parsed = parse_submission(text, column_map={"scenario_id": "scenario_name", "horizon": "week"})
    assert (parsed[0].scenario_id, parsed[0].horizon_week) == ("A", 2)


def test_emit_then_parse_keeps_every_row(records):
    stream = io.StringIO()
    emit_submission(records, stream, comments=["manifest", 'seed: 7'])
    text = stream.getvalue()
    assert text.startswith("# manifest\n# seed: 7\nmodel,")
    assert [r.key() for r in parse_submission(text)] == [r.key() for r in records]


def test_assembles_one_pair_per_week(records, hub_labels):
    pairs = assemble_pairs(records, SCENARIO_B, SCENARIO_A, "inc case", "06", t_app=2)
    assert [pair.meta.t for pair in pairs] == [0, 1, 2, 3]
    assert pairs[0].labels == hub_labels
    assert pairs[0].x.values[11] == pytest.approx(1200.0 * 0.5 + 10)
    assert pairs[0].y.values[11] == pytest.approx(1000.0 * 0.5 + 10)
    assert [pair.is_pre_divergence for pair in pairs] == [True, True, False, False]
    assert pairs[0].meta.model_id == "model-a"


def test_incomplete_week_is_excluded_alone(hub_labels):
    text = submission_text(skip={(SCENARIO_A, 3, 0.5)})
    excluded = []
    pairs = assemble_pairs(
        parse_submission(text), SCENARIO_B, SCENARIO_A, "inc case", "06", t_app=1, excluded=excluded
    )
    assert [pair.meta.t for pair in pairs] == [0, 1, 3]
    assert len(excluded) == 1
    assert isinstance(excluded[0], IncompleteQuantileSet)
    assert (excluded[0].week, excluded[0].found_count) == (2, 22)


def test_every_week_incomplete_raises(hub_labels):
    text = submission_text(weeks=1, skip={(SCENARIO_A, 1, 0.5)})
    with pytest.raises(IncompleteQuantileSet):
        assemble_pairs(parse_submission(text), SCENARIO_B, SCENARIO_A, "inc case", "06", t_app=1)


def test_declared_labels_must_match(records):
    labels = QuantileLabels((0.25, 0.5, 0.75))
    with pytest.raises(IncompleteQuantileSet):
        assemble_pairs(records, SCENARIO_B, SCENARIO_A, "inc case", "06", t_app=1, labels=labels)


def test_duplicate_rows(records):
    with pytest.raises(DuplicateQuantileRow):
        assemble_pairs(records + records[:1], SCENARIO_B, SCENARIO_A, "inc case", "06", t_app=1)


@pytest.mark.parametrize(
    "target, location, scenario",
    [("inc case", "06", "C"), ("inc death", "06", SCENARIO_A), ("inc case", "US", SCENARIO_A)],
)
def test_missing_scenario(records, target, location, scenario):
    with pytest.raises(ScenarioMissing):
        assemble_pairs(records, SCENARIO_B, scenario, target, location, t_app=1)


def test_row_order_does_not_matter(records):
    shuffled = list(records)
    random.Random(3).shuffle(shuffled)
    assert assemble_pairs(shuffled, SCENARIO_B, SCENARIO_A, "inc case", "06", t_app=1) == (
        assemble_pairs(records, SCENARIO_B, SCENARIO_A, "inc case", "06", t_app=1)
    )


def test_several_models_need_a_choice():
    text = submission_text(model="m1") + submission_text(model="m2").split("\n", 1)[1]
    parsed = parse_submission(text)
    with pytest.raises(ScenarioBoundsError):
        assemble_pairs(parsed, SCENARIO_B, SCENARIO_A, "inc case", "06", t_app=1)
    pairs = assemble_pairs(parsed, SCENARIO_B, SCENARIO_A, "inc case", "06", t_app=1, model_id="m2")
    assert {pair.meta.model_id for pair in pairs} == {"m2"}
