"""
Reading and writing scenario hub quantile submissions.

A submission is a CSV with one row per (scenario, target, location, week, quantile).
Lines starting with ``#`` are comments; emitted fixtures use them to embed their
run manifest.
"""
import csv
import enum
import io
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import IO, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from scenario_bounds.quantiles.types import QuantileLabels, ScenarioPair, make_pair
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

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("scenario_id", "target", "location", "type", "quantile", "value")
WEEK_COLUMNS = ("horizon", "target_week_end_date")
MODEL_COLUMNS = ("model", "model_id")
EMITTED_COLUMNS = (
    "model",
    "scenario_id",
    "target",
    "location",
    "type",
    "quantile",
    "value",
    "horizon",
)


class RowTypeEnum(enum.Enum):
    QUANTILE = "quantile"
    POINT = "point"


RowTypeChoices = [(e.value, e.name) for e in RowTypeEnum]


@dataclass(frozen=True)
class SubmissionRecord:
    model_id: str
    scenario_id: str
    target: str
    horizon_week: int
    location: str
    row_type: RowTypeEnum
    quantile: Optional[float]
    value: float
    line: int = 0

    def __post_init__(self):
        if self.row_type is RowTypeEnum.QUANTILE:
            if self.quantile is None or not 0.0 < self.quantile < 1.0:
                raise BadNumber(
                    {"quantile": f"Quantile rows need a quantile in (0, 1), got {self.quantile}"},
                    line=self.line,
                )

    @property
    def week(self) -> int:
        """0-based week index."""
        return self.horizon_week - 1

    def key(self) -> Tuple:
        return (
            self.model_id,
            self.scenario_id,
            self.target,
            self.location,
            self.horizon_week,
            self.row_type.value,
            self.quantile,
            self.value,
        )


def _decode(stream: Union[IO, str, bytes]) -> str:
    if hasattr(stream, "read"):
        stream = stream.read()
    if isinstance(stream, bytes):
        try:
            stream = stream.decode("utf-8")
        except UnicodeDecodeError as error:
            line = stream.count(b"\n", 0, error.start) + 1
            raise BadEncoding(
                {"file": f"Line {line}: byte {error.start} is not valid UTF-8"},
                line=line,
                offset=error.start,
            )
    return stream


def _field_count(line: str) -> int:
    return len(next(csv.reader([line])))


def _read_frame(stream: Union[IO, str, bytes]) -> Tuple[pd.DataFrame, List[int], List[BadNumber]]:
    """
    The data rows as strings, their file line numbers, and one ``BadNumber``
    per row whose field count differs from the header.
    """
    kept, numbers, ragged = [], [], []
    for number, line in enumerate(_decode(stream).splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if kept:
            found, expected = _field_count(line), _field_count(kept[0])
            if found != expected:
                ragged.append(
                    BadNumber(
                        {"row": f"Line {number}: expected {expected} fields, found {found}"},
                        line=number,
                    )
                )
                continue
        kept.append(line)
        numbers.append(number)
    if len(kept) < 2 and not ragged:
        raise EmptyFile({"file": "The submission has no data rows"})

    try:
        frame = pd.read_csv(io.StringIO("\n".join(kept)), dtype=str, keep_default_na=False)
    except pd.errors.ParserError as error:
        raise BadNumber({"file": f"Unreadable CSV: {error}"})
    frame.columns = [column.strip() for column in frame.columns]
    return frame, numbers[1:], ragged


def _parse_float(raw: str, column: str, line: int) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise BadNumber({column: f"Line {line}: {raw!r} is not a number"}, line=line)
    if not math.isfinite(value):
        raise BadNumber({column: f"Line {line}: {raw!r} is not finite"}, line=line)
    return value


def _parse_row(row: Dict[str, str], line: int, model_id: str, week: int) -> SubmissionRecord:
    raw_type = row["type"].strip().lower()
    try:
        row_type = RowTypeEnum(raw_type)
    except ValueError:
        raise BadNumber({"type": f"Line {line}: unknown row type {row['type']!r}"}, line=line)

    quantile = None
    raw_quantile = row["quantile"].strip()
    if row_type is RowTypeEnum.QUANTILE or raw_quantile not in ("", "NA"):
        quantile = _parse_float(raw_quantile, "quantile", line)
        if not 0.0 < quantile < 1.0:
            raise BadNumber(
                {"quantile": f"Line {line}: quantile {raw_quantile} is outside (0, 1)"},
                line=line,
            )

    return SubmissionRecord(
        model_id=model_id,
        scenario_id=row["scenario_id"].strip(),
        target=row["target"].strip(),
        horizon_week=week,
        location=row["location"].strip(),
        row_type=row_type,
        quantile=quantile,
        value=_parse_float(row["value"].strip(), "value", line),
        line=line,
    )


def _horizon(raw: str, line: int) -> int:
    try:
        horizon = int(raw)
    except (TypeError, ValueError):
        raise BadNumber({"horizon": f"Line {line}: {raw!r} is not a week number"}, line=line)
    if horizon < 1:
        raise BadNumber({"horizon": f"Line {line}: horizon must be at least 1"}, line=line)
    return horizon


def parse_submission(
    stream,
    model_id: Optional[str] = None,
    column_map: Optional[Dict[str, str]] = None,
    lenient: bool = False,
    skipped: Optional[List[Tuple[int, str]]] = None,
) -> List[SubmissionRecord]:
    """
    Parse a hub CSV into records.

    ``column_map`` maps our column names to the names used by the file. Malformed
    rows raise ``BadNumber`` unless ``lenient`` is set, in which case they are
    logged, appended to ``skipped`` as ``(line, message)`` and left out.
    """
    frame, line_numbers, ragged = _read_frame(stream)
    if column_map:
        frame = frame.rename(columns={theirs: ours for ours, theirs in column_map.items()})

    missing = [column for column in REQUIRED_COLUMNS if column not in frame.columns]
    if not any(column in frame.columns for column in WEEK_COLUMNS):
        missing.append(" or ".join(WEEK_COLUMNS))
    if missing:
        raise MissingColumn({"columns": [f"Missing column {column}" for column in missing]})

    model_column = next((c for c in MODEL_COLUMNS if c in frame.columns), None)
    by_horizon = "horizon" in frame.columns

    if not by_horizon:
        dates = pd.to_datetime(frame["target_week_end_date"], errors="coerce")
        models = frame[model_column] if model_column else pd.Series([model_id or ""] * len(frame))
        ranks = (
            pd.DataFrame({"model": models, "scenario": frame["scenario_id"], "date": dates})
            .groupby(["model", "scenario"])["date"]
            .rank(method="dense")
        )

    def reject(error: BadNumber):
        if not lenient:
            raise error
        message = error.describe()
        logger.warning("Skipping malformed row: %s", message)
        if skipped is not None:
            skipped.append((error.line, message))

    pending = list(ragged)
    records = []
    for position, row in enumerate(frame.to_dict("records")):
        line = line_numbers[position]
        while pending and pending[0].line < line:
            reject(pending.pop(0))
        try:
            if by_horizon:
                week = _horizon(row["horizon"].strip(), line)
            elif pd.isna(ranks.iloc[position]):
                raise BadNumber(
                    {"target_week_end_date": f"Line {line}: {row['target_week_end_date']!r} is not a date"},
                    line=line,
                )
            else:
                week = int(ranks.iloc[position])
            model = row[model_column].strip() if model_column else (model_id or "")
            records.append(_parse_row(row, line, model, week))
        except BadNumber as error:
            error.line = line
            reject(error)
    for error in pending:
        reject(error)

    points = sum(1 for record in records if record.row_type is RowTypeEnum.POINT)
    logger.info("Parsed %d rows (%d point rows)", len(records), points)
    return records


def _format_float(value: Optional[float]) -> str:
    return "NA" if value is None else repr(float(value))


def emit_submission(
    records: Iterable[SubmissionRecord], stream: IO[str], comments: Sequence[str] = ()
) -> None:
    """Write records in the hub dialect; floats keep their exact ``repr``."""
    for comment in comments:
        stream.write(f"# {comment}\n")
    frame = pd.DataFrame(
        [
            {
                "model": record.model_id,
                "scenario_id": record.scenario_id,
                "target": record.target,
                "location": record.location,
                "type": record.row_type.value,
                "quantile": _format_float(record.quantile),
                "value": _format_float(record.value),
                "horizon": str(record.horizon_week),
            }
            for record in records
        ],
        columns=list(EMITTED_COLUMNS),
    )
    frame.to_csv(stream, index=False, lineterminator="\n")


def pair_records(pair: ScenarioPair, scenario_x: str, scenario_y: str) -> List[SubmissionRecord]:
    """Quantile rows of both scenarios of one week."""
    records = []
    for scenario, series in ((scenario_x, pair.x), (scenario_y, pair.y)):
        for quantile, value in zip(pair.labels, series.values):
            records.append(
                SubmissionRecord(
                    model_id=pair.meta.model_id,
                    scenario_id=scenario,
                    target=pair.meta.target,
                    horizon_week=pair.meta.t + 1,
                    location=pair.meta.location,
                    row_type=RowTypeEnum.QUANTILE,
                    quantile=quantile,
                    value=value,
                )
            )
    return records


def _single_model(records: Sequence[SubmissionRecord], model_id: Optional[str]) -> str:
    if model_id is not None:
        return model_id
    models = sorted({record.model_id for record in records})
    if len(models) > 1:
        raise ScenarioBoundsError(
            {"model_id": f"The input holds several models ({', '.join(models)}); pick one"}
        )
    return models[0] if models else ""


def assemble_pairs(
    records: Sequence[SubmissionRecord],
    scenario_x: str,
    scenario_y: str,
    target: str,
    location: str,
    t_app: int,
    model_id: Optional[str] = None,
    labels: Optional[QuantileLabels] = None,
    excluded: Optional[List[IncompleteQuantileSet]] = None,
) -> List[ScenarioPair]:
    """
    Build one ``ScenarioPair`` per week, X first, ordered by week.

    Weeks whose quantile set differs from the declared labels (by default every
    label seen for this target and location) are logged, appended to ``excluded``
    and skipped.
    """
    selected = [
        record
        for record in records
        if record.row_type is RowTypeEnum.QUANTILE
        and record.target == target
        and record.location == location
    ]
    model_id = _single_model(selected, model_id)
    selected = [record for record in selected if record.model_id == model_id]

    grid: Dict[Tuple[str, int], Dict[float, SubmissionRecord]] = defaultdict(dict)
    for record in selected:
        if record.scenario_id not in (scenario_x, scenario_y):
            continue
        cell = grid[(record.scenario_id, record.week)]
        if record.quantile in cell:
            raise DuplicateQuantileRow(
                {
                    "quantile": f"Line {record.line}: quantile {record.quantile} repeats for "
                    f"scenario {record.scenario_id} week {record.week}"
                },
                line=record.line,
            )
        cell[record.quantile] = record

    for scenario in (scenario_x, scenario_y):
        if not any(key[0] == scenario for key in grid):
            raise ScenarioMissing(
                {
                    "scenario": f"Scenario {scenario} has no quantile rows for target "
                    f"{target!r} at location {location!r}"
                }
            )

    if labels is None:
        labels = QuantileLabels(tuple(sorted({q for cell in grid.values() for q in cell})))
    declared = set(labels.values)

    pairs, problems = [], []
    for week in sorted({key[1] for key in grid}):
        cells = [grid.get((scenario, week), {}) for scenario in (scenario_x, scenario_y)]
        incomplete = next((cell for cell in cells if set(cell) != declared), None)
        if incomplete is not None:
            problem = IncompleteQuantileSet(
                {
                    "week": f"Week {week} has {len(incomplete)} quantiles, "
                    f"expected {len(declared)}"
                },
                week=week,
                found_count=len(incomplete),
            )
            logger.warning("Excluding week %d: %s", week, problem.describe())
            problems.append(problem)
            continue
        x_cell, y_cell = cells
        pairs.append(
            make_pair(
                labels,
                [x_cell[q].value for q in labels],
                [y_cell[q].value for q in labels],
                model_id=model_id,
                target=target,
                location=location,
                t=week,
                t_app=t_app,
            )
        )

    if excluded is not None:
        excluded.extend(problems)
    if not pairs and problems:
        raise problems[0]
    return pairs
