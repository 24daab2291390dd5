import json

from rest_framework.exceptions import ValidationError

from scenario_bounds.hub.submissions import emit_submission
from scenario_bounds.oracle.serializers import SimulationSpecSerializer
from scenario_bounds.oracle.simulation import simulate, spec_as_dict
from scenario_bounds.runs.manifest import RunManifest, file_digest, record_run
from scenario_bounds.runs.models import CommandEnum
from scenario_bounds.utils.commands import ScenarioBoundsCommand


class Command(ScenarioBoundsCommand):
    help = "Write a hub submission fixture generated from a synthetic coupled universe"

    def add_arguments(self, parser):
        parser.add_argument("spec", help="JSON simulation spec")
        parser.add_argument("output", help="Hub CSV to write")
        parser.add_argument("--seed", type=int, default=None, help="Overrides the seed of the spec")

    def run(self, **options):
        with open(options["spec"], encoding="utf-8") as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as error:
                raise ValidationError({"spec": f"Not valid JSON: {error}"})
        if not isinstance(data, dict):
            raise ValidationError({"spec": "Expected a JSON object"})
        if options["seed"] is not None:
            data["seed"] = options["seed"]

        serializer = SimulationSpecSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        spec = serializer.validated_data
        result = simulate(spec)

        manifest = RunManifest.build(
            CommandEnum.SIMULATE.value,
            input_digest=file_digest(options["spec"]),
            scenarios=(spec["scenario_x"], spec["scenario_y"]),
            labels=spec["labels"],
            violation=result.true_epsilon,
            seed=spec["seed"],
            options={"spec": spec_as_dict(spec)},
        )
        with open(options["output"], "w", encoding="utf-8", newline="\n") as handle:
            emit_submission(result.records, handle, comments=["manifest"] + manifest.comment_lines())

        record_run(
            manifest,
            {
                "output_digest": file_digest(options["output"]),
                "rows": len(result.records),
                "true_epsilon": result.true_epsilon.as_dict(),
            },
        )
        self.stdout.write(
            f"Wrote {len(result.records)} rows to {options['output']}; "
            f"true violation eps_l={result.true_epsilon.eps_l} eps_u={result.true_epsilon.eps_u}"
        )
