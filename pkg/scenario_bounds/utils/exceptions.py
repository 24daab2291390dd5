from rest_framework.exceptions import ValidationError


class ScenarioBoundsError(ValidationError):
    """
    Base class for input and precondition failures.

    Follows the DRF ValidationError contract: ``detail`` is a field -> message
    mapping (or a list of messages). Extra keyword arguments are kept as
    attributes so callers can read positional context such as ``line`` or ``week``.
    """

    default_detail = "Invalid input."
    default_code = "invalid"

    def __init__(self, detail=None, code=None, **context):
        super().__init__(detail, code)
        for key, value in context.items():
            setattr(self, key, value)

    def describe(self):
        """Flatten ``detail`` into a single human readable line."""
        return describe_error(self)


def describe_error(error: ValidationError) -> str:
    return "; ".join(_flatten(error.detail))


def _flatten(detail, prefix=""):
    if isinstance(detail, dict):
        for key, value in detail.items():
            yield from _flatten(value, f"{prefix}{key}: ")
    elif isinstance(detail, list):
        for item in detail:
            yield from _flatten(item, prefix)
    else:
        yield f"{prefix}{detail}"


# Quantile series
# ------------------------------------------------------------------------------
class InvalidLabels(ScenarioBoundsError):
    default_code = "invalid_labels"


class LengthMismatch(ScenarioBoundsError):
    default_code = "length_mismatch"


class NonMonotoneValues(ScenarioBoundsError):
    default_code = "non_monotone_values"


class NonFiniteValue(ScenarioBoundsError):
    default_code = "non_finite_value"


class LabelMismatch(ScenarioBoundsError):
    default_code = "label_mismatch"


class IndexOutOfRange(ScenarioBoundsError):
    default_code = "index_out_of_range"


class InvalidViolation(ScenarioBoundsError):
    default_code = "invalid_violation"


class DegenerateSeries(ScenarioBoundsError):
    default_code = "degenerate_series"


# Estimation and bounding
# ------------------------------------------------------------------------------
class EmptyInput(ScenarioBoundsError):
    default_code = "empty_input"


class PostDivergenceWeek(ScenarioBoundsError):
    default_code = "post_divergence_week"


class NoPreDivergenceWeeks(ScenarioBoundsError):
    default_code = "no_pre_divergence_weeks"


class EmptySamples(ScenarioBoundsError):
    default_code = "empty_samples"


class InvalidAlpha(ScenarioBoundsError):
    default_code = "invalid_alpha"


class InvalidBoundConfig(ScenarioBoundsError):
    default_code = "invalid_bound_config"


# Oracle
# ------------------------------------------------------------------------------
class InvalidUniverse(ScenarioBoundsError):
    default_code = "invalid_universe"


class InvalidWindow(ScenarioBoundsError):
    default_code = "invalid_window"


# Hub submissions
# ------------------------------------------------------------------------------
class EmptyFile(ScenarioBoundsError):
    default_code = "empty_file"


class MissingColumn(ScenarioBoundsError):
    default_code = "missing_column"


class BadNumber(ScenarioBoundsError):
    default_code = "bad_number"


class BadEncoding(ScenarioBoundsError):
    default_code = "bad_encoding"


class DuplicateQuantileRow(ScenarioBoundsError):
    default_code = "duplicate_quantile_row"


class ScenarioMissing(ScenarioBoundsError):
    default_code = "scenario_missing"


class IncompleteQuantileSet(ScenarioBoundsError):
    default_code = "incomplete_quantile_set"


class InvariantViolation(RuntimeError):
    """Raised when a computed result breaks an invariant the algorithms guarantee."""
