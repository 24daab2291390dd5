import json
from typing import Dict

from rest_framework import serializers
from rest_framework.exceptions import ValidationError

from scenario_bounds.hub.submissions import MODEL_COLUMNS, REQUIRED_COLUMNS, WEEK_COLUMNS

MAPPABLE_COLUMNS = REQUIRED_COLUMNS + WEEK_COLUMNS + MODEL_COLUMNS


class ColumnMapSerializer(serializers.Serializer):
    """Names a hub round uses for our columns, e.g. ``{"scenario_id": "scenario_name"}``."""

    scenario_id = serializers.CharField(required=False)
    target = serializers.CharField(required=False)
    location = serializers.CharField(required=False)
    type = serializers.CharField(required=False)
    quantile = serializers.CharField(required=False)
    value = serializers.CharField(required=False)
    horizon = serializers.CharField(required=False)
    target_week_end_date = serializers.CharField(required=False)
    model = serializers.CharField(required=False)
    model_id = serializers.CharField(required=False)

    def validate(self, attrs):
        unknown = sorted(set(self.initial_data) - set(MAPPABLE_COLUMNS))
        if unknown:
            raise ValidationError({"columns": f"Unknown columns in mapping: {', '.join(unknown)}"})
        names = list(attrs.values())
        if len(names) != len(set(names)):
            raise ValidationError({"columns": "Two columns cannot map to the same file column"})
        return attrs


def load_column_map(path) -> Dict[str, str]:
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as error:
            raise ValidationError({"column_map": f"Not valid JSON: {error}"})
    if not isinstance(data, dict):
        raise ValidationError({"column_map": "Expected a JSON object"})
    serializer = ColumnMapSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return dict(serializer.validated_data)
