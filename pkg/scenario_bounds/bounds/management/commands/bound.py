import logging
from typing import List

from django.conf import settings
from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework.exceptions import ValidationError

from scenario_bounds.bounds.intervals import ModeEnum, extract_ci
from scenario_bounds.bounds.sampling import BoundConfig, MethodEnum, sample_bounds
from scenario_bounds.hub.submissions import assemble_pairs
from scenario_bounds.quantiles.types import ProvenanceEnum, ViolationParams
from scenario_bounds.runs.manifest import RunManifest, record_run, write_results
from scenario_bounds.runs.models import CommandEnum, Run
from scenario_bounds.utils.commands import SubmissionCommand
from scenario_bounds.utils.exceptions import InvariantViolation

logger = logging.getLogger(__name__)

METHODS = {"grid": MethodEnum.QUANTILE_GRID, "interp": MethodEnum.INTERPOLATED}
RESULT_COLUMNS = (
    "model_id",
    "target",
    "location",
    "t",
    "lower",
    "upper",
    "alpha",
    "p_low",
    "p_high",
    "certificate",
    "method",
    "eps_l",
    "eps_u",
)


class Command(SubmissionCommand):
    help = "Per-week confidence intervals for the difference X - Y of two scenarios"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--alpha", type=float, default=None)
        parser.add_argument(
            "--eps-l", type=float, action="append", default=None,
            help="Repeat with --eps-u to sweep several violation levels",
        )
        parser.add_argument("--eps-u", type=float, action="append", default=None)
        parser.add_argument(
            "--eps-from-run", default=None, help="Reuse the violation of an earlier epsilon run"
        )
        parser.add_argument(
            "--eps-method", choices=("estimate", "pchip"), default="estimate",
            help="Which value of the earlier run to reuse",
        )
        parser.add_argument("--method", choices=sorted(METHODS), default="grid")
        parser.add_argument("--n-samples", type=int, default=None)
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument("--shards", type=int, default=1)
        parser.add_argument("--mode", choices=[e.value for e in ModeEnum], default=ModeEnum.SYMMETRIC.value)
        parser.add_argument("--t-app", type=int, default=0)
        parser.add_argument("--output", default=None, help="Write results as JSONL and CSV")

    def violations(self, options) -> List[ViolationParams]:
        """One entry per violation level; a single given side is paired with zeros."""
        eps_l, eps_u = options["eps_l"] or [], options["eps_u"] or []
        if options["eps_from_run"]:
            if eps_l or eps_u:
                raise ValidationError({"eps_from_run": "Give either --eps-from-run or --eps-l/--eps-u"})
            try:
                run = Run.objects.get(external_id=options["eps_from_run"])
            except (Run.DoesNotExist, DjangoValidationError):
                raise ValidationError({"eps_from_run": f"No run {options['eps_from_run']}"})
            return [run.violation(options["model"], options["eps_method"])]

        if eps_l and eps_u and len(eps_l) != len(eps_u):
            raise ValidationError(
                {"eps_u": f"Got {len(eps_l)} --eps-l values but {len(eps_u)} --eps-u values"}
            )
        count = max(len(eps_l), len(eps_u), 1)
        eps_l, eps_u = eps_l or [0.0] * count, eps_u or [0.0] * count
        return [
            ViolationParams(low, high, ProvenanceEnum.USER_SUPPLIED)
            for low, high in zip(eps_l, eps_u)
        ]

    def run(self, **options):
        alpha = options["alpha"] if options["alpha"] is not None else settings.SCENARIO_BOUNDS_ALPHA
        violations = self.violations(options)
        cfg = BoundConfig.from_settings(
            n_samples=options["n_samples"],
            seed=options["seed"],
            method=METHODS[options["method"]],
            violation=violations[0],
        )
        scenario_x, scenario_y = options["scenarios"]

        records, digest = self.load_records(options)
        pairs = assemble_pairs(
            records,
            scenario_x,
            scenario_y,
            options["target"],
            options["location"],
            options["t_app"],
            model_id=options["model"],
        )

        rows, failures = [], []
        for violation in violations:
            level = cfg.with_violation(violation)
            for pair in pairs:
                samples = sample_bounds(pair, level, shards=options["shards"])
                try:
                    interval = extract_ci(samples, alpha, options["mode"])
                except InvariantViolation as error:
                    logger.error("Week %s at %s: %s", pair.meta.t, violation.as_dict(), error)
                    failures.append(pair.meta.t)
                    continue
                row = {
                    "model_id": pair.meta.model_id,
                    "target": pair.meta.target,
                    "location": pair.meta.location,
                    "t": pair.meta.t,
                    "method": cfg.method.value,
                    "eps_l": violation.eps_l,
                    "eps_u": violation.eps_u,
                }
                row.update(interval.as_dict())
                rows.append(row)

        manifest = RunManifest.build(
            CommandEnum.BOUND.value,
            input_digest=digest,
            scenarios=options["scenarios"],
            labels=pairs[0].labels if pairs else None,
            violation=violations[0],
            alpha=alpha,
            n_samples=cfg.n_samples,
            seed=cfg.seed,
            options={
                "target": options["target"],
                "location": options["location"],
                "method": cfg.method.value,
                "mode": options["mode"],
                "shard_size": cfg.shard_size,
                "eps_from_run": options["eps_from_run"],
                "violations": [v.as_dict() for v in violations],
            },
        )
        if options["output"]:
            write_results(options["output"], manifest, rows, RESULT_COLUMNS)
        else:
            self.emit_json({"manifest": manifest.as_dict(), "intervals": rows})
        record_run(manifest, {"intervals": rows, "failed_weeks": failures}, succeeded=not failures)

        if failures:
            self.fail(f"No valid interval at alpha={alpha} for weeks {sorted(set(failures))}")
        self.stderr.write(self.style.SUCCESS(f"{len(rows)} intervals at alpha={alpha}"))
