from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class QuantilesConfig(AppConfig):
    name = "scenario_bounds.quantiles"
    verbose_name = _("Quantiles")
