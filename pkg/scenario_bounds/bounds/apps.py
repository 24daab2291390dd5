from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class BoundsConfig(AppConfig):
    name = "scenario_bounds.bounds"
    verbose_name = _("Scenario bounds")
