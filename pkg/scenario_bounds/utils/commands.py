import json
import logging

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from scenario_bounds.hub.serializers import load_column_map
from scenario_bounds.hub.submissions import parse_submission
from scenario_bounds.runs.manifest import file_digest
from scenario_bounds.utils.exceptions import describe_error

logger = logging.getLogger(__name__)

INPUT_ERROR = 2
VALIDATION_FAILURE = 3


class ScenarioBoundsCommand(BaseCommand):
    """
    Management command whose input errors exit with status 2.

    Subclasses implement ``run`` instead of ``handle``. Raise ``CommandError`` with
    ``returncode=VALIDATION_FAILURE`` when a computed result fails its check.
    """

    def run(self, **options):
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except ValidationError as error:
            raise CommandError(describe_error(error), returncode=INPUT_ERROR)
        except OSError as error:
            raise CommandError(str(error), returncode=INPUT_ERROR)

    def emit_json(self, data):
        self.stdout.write(json.dumps(data, indent=2, sort_keys=True))

    def fail(self, message):
        raise CommandError(message, returncode=VALIDATION_FAILURE)


class SubmissionCommand(ScenarioBoundsCommand):
    """Command reading one hub submission file and one ordered scenario pair."""

    def add_arguments(self, parser):
        parser.add_argument("input", help="Hub submission CSV")
        parser.add_argument(
            "--scenarios",
            nargs=2,
            metavar=("X", "Y"),
            required=True,
            help="Scenario ids; the difference studied is X - Y",
        )
        parser.add_argument("--target", required=True)
        parser.add_argument("--location", required=True)
        parser.add_argument("--model", default=None, help="Model id when the file holds several")
        parser.add_argument("--column-map", default=None, help="JSON file renaming hub columns")
        parser.add_argument(
            "--lenient", action="store_true", help="Skip malformed rows instead of failing"
        )

    def load_records(self, options):
        column_map = load_column_map(options["column_map"]) if options["column_map"] else None
        skipped = []
        with open(options["input"], "rb") as handle:
            records = parse_submission(
                handle,
                column_map=column_map,
                lenient=options["lenient"],
                skipped=skipped,
            )
        for line, message in skipped:
            self.stderr.write(self.style.WARNING(f"Skipped line {line}: {message}"))
        return records, file_digest(options["input"])
