from django.conf import settings

from scenario_bounds.bounds.violation import (
    ReadingEnum,
    approx_epsilon_by_week,
    estimate_epsilon,
)
from scenario_bounds.hub.submissions import RowTypeEnum, assemble_pairs
from scenario_bounds.quantiles.types import ProvenanceEnum, ViolationParams
from scenario_bounds.runs.manifest import RunManifest, record_run, write_results
from scenario_bounds.runs.models import CommandEnum
from scenario_bounds.utils.commands import SubmissionCommand
from scenario_bounds.utils.exceptions import NoPreDivergenceWeeks

METHODS = ("estimate", "pchip", "both")
TRACE_COLUMNS = ("model_id", "method", "t", "eps_l", "eps_u")


class Command(SubmissionCommand):
    help = "Estimate and approximate the rank violation from the weeks before divergence"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--t-app", type=int, required=True, help="Divergence week; weeks t < t_app are used"
        )
        parser.add_argument("--method", choices=METHODS, default="both")
        parser.add_argument(
            "--reading", choices=[e.value for e in ReadingEnum], default=ReadingEnum.CONSERVATIVE.value
        )
        parser.add_argument("--grid-points", type=int, default=None)
        parser.add_argument("--output", default=None, help="Write the weekly trace as JSONL and CSV")

    def run(self, **options):
        t_app = options["t_app"]
        if t_app < 1:
            raise NoPreDivergenceWeeks({"t_app": "Needs at least one week before divergence (t_app >= 1)"})
        grid_points = options["grid_points"] or settings.SCENARIO_BOUNDS_GRID_POINTS
        scenario_x, scenario_y = options["scenarios"]
        methods = ("estimate", "pchip") if options["method"] == "both" else (options["method"],)

        records, digest = self.load_records(options)
        if options["model"] is not None:
            model_ids = [options["model"]]
        else:
            model_ids = sorted(
                {
                    r.model_id
                    for r in records
                    if r.row_type is RowTypeEnum.QUANTILE
                    and r.target == options["target"]
                    and r.location == options["location"]
                }
            ) or [""]

        summary, trace, labels = {}, [], None
        for model_id in model_ids:
            pairs = assemble_pairs(
                records,
                scenario_x,
                scenario_y,
                options["target"],
                options["location"],
                t_app,
                model_id=model_id,
            )
            pre = [pair for pair in pairs if pair.is_pre_divergence]
            if not pre:
                raise NoPreDivergenceWeeks(
                    {"t_app": f"Model {model_id!r} has no complete week before week {t_app}"}
                )
            labels = labels or pre[0].labels
            summary[model_id] = {}

            if "estimate" in methods:
                estimated = estimate_epsilon(pre, reading=options["reading"])
                summary[model_id]["estimate"] = estimated.final.as_dict()
                for t, (eps_l, eps_u) in estimated.weekly_maxima().items():
                    trace.append(self._row(model_id, "estimate", t, eps_l, eps_u))

            if "pchip" in methods:
                weeks = approx_epsilon_by_week(pre, grid_points=grid_points)
                approximated = ViolationParams(
                    max(params.eps_l for _, params in weeks),
                    max(params.eps_u for _, params in weeks),
                    ProvenanceEnum.INTERPOLATED,
                )
                summary[model_id]["pchip"] = approximated.as_dict()
                for t, params in weeks:
                    trace.append(self._row(model_id, "pchip", t, params.eps_l, params.eps_u))

            self.stderr.write(f"{model_id or '(unnamed model)'}: {len(pre)} pre-divergence weeks")

        manifest = RunManifest.build(
            CommandEnum.EPSILON.value,
            input_digest=digest,
            scenarios=options["scenarios"],
            labels=labels,
            options={
                "target": options["target"],
                "location": options["location"],
                "t_app": t_app,
                "method": options["method"],
                "reading": options["reading"],
                "grid_points": grid_points,
            },
        )
        if options["output"]:
            write_results(options["output"], manifest, trace, TRACE_COLUMNS)
        run = record_run(manifest, {"models": summary, "trace": trace})
        self.emit_json(
            {"run": str(run.external_id), "manifest": manifest.as_dict(), "models": summary, "trace": trace}
        )

    @staticmethod
    def _row(model_id, method, t, eps_l, eps_u):
        return {"model_id": model_id, "method": method, "t": t, "eps_l": eps_l, "eps_u": eps_u}
