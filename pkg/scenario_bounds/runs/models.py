import enum

from django.db import models
from rest_framework.exceptions import ValidationError

from scenario_bounds.quantiles.types import ViolationParams
from scenario_bounds.utils.models.base import BaseUUIDModel


class CommandEnum(enum.Enum):
    EPSILON = "epsilon"
    BOUND = "bound"
    SIMULATE = "simulate"
    VALIDATE = "validate"


CommandChoices = [(e.value, e.name) for e in CommandEnum]


class StatusEnum(enum.Enum):
    SUCCEEDED = "succeeded"
    FAILED = "failed"


StatusChoices = [(e.value, e.name) for e in StatusEnum]


class Run(BaseUUIDModel):
    """
    One invocation of a management command.

    ``manifest`` holds everything needed to repeat the run; ``result`` holds the
    summary the command reported. Epsilon runs store their per-model violation
    values so a later ``bound`` can reuse them.
    """

    command = models.CharField(max_length=16, choices=CommandChoices)
    status = models.CharField(
        max_length=16, choices=StatusChoices, default=StatusEnum.SUCCEEDED.value
    )
    input_digest = models.CharField(max_length=64, blank=True, default="")
    seed = models.DecimalField(max_digits=20, decimal_places=0, null=True, blank=True)
    manifest = models.JSONField(default=dict)
    result = models.JSONField(default=dict)

    class Meta:
        ordering = ("-created_date",)

    def __str__(self):
        return f"{self.command} {self.external_id} ({self.status})"

    def violation(self, model_id=None, method="estimate") -> ViolationParams:
        """Violation values an epsilon run reported for one model and method."""
        if self.command != CommandEnum.EPSILON.value:
            raise ValidationError({"run": f"Run {self.external_id} is not an epsilon run"})
        models_ = self.result.get("models", {})
        if model_id is None:
            if len(models_) != 1:
                raise ValidationError(
                    {"model_id": f"Run {self.external_id} covers {len(models_)} models; pick one"}
                )
            model_id = next(iter(models_))
        try:
            data = models_[model_id][method]
        except KeyError:
            raise ValidationError(
                {"run": f"Run {self.external_id} has no {method} values for model {model_id!r}"}
            )
        return ViolationParams.from_dict(data)
