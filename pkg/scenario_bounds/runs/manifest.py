"""
Run manifests and the result files that embed them.

Result files are deterministic: keys are sorted, floats keep their ``repr`` and
nothing time-dependent is written.
"""
import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd

import scenario_bounds
from scenario_bounds.bounds.sampling import PRNG_NAME
from scenario_bounds.quantiles.types import QuantileLabels, ViolationParams
from scenario_bounds.runs.models import Run, StatusEnum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunManifest:
    command: str
    input_digest: str = ""
    scenarios: Sequence[str] = ()
    labels: Sequence[float] = ()
    violation: Optional[Dict[str, Any]] = None
    alpha: Optional[float] = None
    n_samples: Optional[int] = None
    seed: Optional[int] = None
    tool_version: str = scenario_bounds.__version__
    prng: str = PRNG_NAME
    options: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        command: str,
        input_digest: str = "",
        scenarios: Sequence[str] = (),
        labels: Optional[QuantileLabels] = None,
        violation: Optional[ViolationParams] = None,
        **kwargs,
    ) -> "RunManifest":
        return cls(
            command=command,
            input_digest=input_digest,
            scenarios=list(scenarios),
            labels=list(labels.values) if labels is not None else [],
            violation=violation.as_dict() if violation is not None else None,
            **kwargs,
        )

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["scenarios"] = list(self.scenarios)
        data["labels"] = list(self.labels)
        return data

    def comment_lines(self) -> List[str]:
        """One ``key: json`` line per field, for CSV headers."""
        return [
            f"{key}: {_dumps(value)}" for key, value in sorted(self.as_dict().items())
        ]


def _dumps(value) -> str:
    return json.dumps(value, sort_keys=True)


def file_digest(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_jsonl(path, manifest: RunManifest, rows: Iterable[Dict[str, Any]]) -> None:
    """First line is ``{"manifest": ...}``, then one object per row."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(_dumps({"manifest": manifest.as_dict()}) + "\n")
        for row in rows:
            handle.write(_dumps(row) + "\n")


def write_csv(path, manifest: RunManifest, rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("# manifest\n")
        for line in manifest.comment_lines():
            handle.write(f"# {line}\n")
        pd.DataFrame(list(rows), columns=list(columns)).to_csv(
            handle, index=False, lineterminator="\n"
        )


def write_results(output, manifest: RunManifest, rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> List[Path]:
    """Write ``<output>.jsonl`` and its ``<output>.csv`` mirror."""
    base = Path(output)
    if base.suffix in (".jsonl", ".csv"):
        base = base.with_suffix("")
    paths = [base.with_suffix(".jsonl"), base.with_suffix(".csv")]
    write_jsonl(paths[0], manifest, rows)
    write_csv(paths[1], manifest, rows, columns)
    logger.info("Wrote %d rows to %s", len(rows), ", ".join(str(p) for p in paths))
    return paths


def read_jsonl(path) -> Dict[str, Any]:
    with open(path, encoding="utf-8") as handle:
        lines = [json.loads(line) for line in handle if line.strip()]
    return {"manifest": lines[0]["manifest"] if lines else {}, "rows": lines[1:]}


def record_run(manifest: RunManifest, result: Dict[str, Any], succeeded: bool = True) -> Run:
    status = StatusEnum.SUCCEEDED if succeeded else StatusEnum.FAILED
    run = Run.objects.create(
        command=manifest.command,
        status=status.value,
        input_digest=manifest.input_digest,
        seed=manifest.seed,
        manifest=manifest.as_dict(),
        result=result,
    )
    logger.info("Recorded run %s (%s, %s)", run.external_id, run.command, run.status)
    return run
