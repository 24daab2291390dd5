from django.conf import settings
from rest_framework.exceptions import ValidationError

from scenario_bounds.oracle.suites import SUITES, run_suites
from scenario_bounds.runs.manifest import RunManifest, record_run
from scenario_bounds.runs.models import CommandEnum
from scenario_bounds.utils.commands import ScenarioBoundsCommand


class Command(ScenarioBoundsCommand):
    help = "Run the synthetic-oracle property suites; exits 3 when any suite fails"

    def add_arguments(self, parser):
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument("--trials", type=int, default=100)
        parser.add_argument(
            "--suite", action="append", choices=sorted(SUITES), default=None, dest="suites",
            help="Suite to run; repeat for several (default: all)",
        )
        parser.add_argument(
            "--understate-epsilon",
            action="store_true",
            help="Run the coverage suite with a violation known to be too small",
        )

    def run(self, **options):
        seed = options["seed"] if options["seed"] is not None else settings.SCENARIO_BOUNDS_SEED
        if options["trials"] < 1:
            raise ValidationError({"trials": "Must be at least 1"})
        reports = run_suites(options["suites"], options["trials"], seed, understate=options["understate_epsilon"])

        for report in reports:
            style = self.style.SUCCESS if report.passed else self.style.ERROR
            self.stderr.write(style(f"{report.name}: {report.checks} checks, {len(report.failures)} failures"))

        manifest = RunManifest.build(
            CommandEnum.VALIDATE.value,
            seed=seed,
            options={
                "trials": options["trials"],
                "suites": [report.name for report in reports],
                "understate_epsilon": options["understate_epsilon"],
            },
        )
        summary = [report.as_dict() for report in reports]
        passed = all(report.passed for report in reports)
        record_run(manifest, {"suites": summary, "passed": passed}, succeeded=passed)
        self.emit_json({"manifest": manifest.as_dict(), "suites": summary, "passed": passed})
        if not passed:
            self.fail("Validation failed: " + ", ".join(r.name for r in reports if not r.passed))
