from django.conf import settings
from rest_framework import serializers
from rest_framework.exceptions import ValidationError

from scenario_bounds.oracle.laws import GaussianLaw, law_from_dict
from scenario_bounds.quantiles.types import QuantileLabels, uniform_labels


class LawField(serializers.DictField):
    def to_internal_value(self, data):
        return law_from_dict(super().to_internal_value(data))


class SimulationSpecSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=2, default=10000)
    weeks = serializers.IntegerField(min_value=1, default=4)
    t_app = serializers.IntegerField(min_value=0, default=1)
    seed = serializers.IntegerField(min_value=0, max_value=2 ** 64 - 1, required=False)

    labels = serializers.ListField(child=serializers.FloatField(), required=False)
    label_count = serializers.IntegerField(
        min_value=2, required=False, help_text="Evenly spaced labels in [0.01, 0.99]"
    )

    x_law = LawField(default=lambda: GaussianLaw(100.0, 20.0))
    y_law = LawField(default=lambda: GaussianLaw(80.0, 30.0))
    latent = serializers.ChoiceField(choices=["grid", "random"], default="random")
    growth = serializers.FloatField(min_value=0.0, default=1.0)

    window = serializers.IntegerField(min_value=0, default=0, help_text="Rank window of the violation")
    extremal = serializers.BooleanField(default=False)

    model_id = serializers.CharField(default="oracle")
    target = serializers.CharField(default="cum case")
    location = serializers.CharField(default="US")
    scenario_x = serializers.CharField(default="B")
    scenario_y = serializers.CharField(default="A")

    def validate(self, attrs):
        if "labels" in attrs and "label_count" in attrs:
            raise ValidationError({"labels": "Give either labels or label_count, not both"})
        if "labels" in attrs:
            attrs["labels"] = QuantileLabels(tuple(attrs["labels"]))
        elif "label_count" in attrs:
            attrs["labels"] = uniform_labels(attrs.pop("label_count"))
        else:
            attrs["labels"] = QuantileLabels(tuple(settings.SCENARIO_BOUNDS_QUANTILE_LABELS))

        if attrs["growth"] <= 0:
            raise ValidationError({"growth": "Must be positive"})
        if attrs["window"] >= attrs["n"]:
            raise ValidationError({"window": f"Must be below n ({attrs['n']})"})
        if attrs["scenario_x"] == attrs["scenario_y"]:
            raise ValidationError({"scenario_y": "The two scenarios need different ids"})
        attrs.setdefault("seed", settings.SCENARIO_BOUNDS_SEED)
        return attrs
