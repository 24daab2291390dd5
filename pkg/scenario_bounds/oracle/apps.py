from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class OracleConfig(AppConfig):
    name = "scenario_bounds.oracle"
    verbose_name = _("Coupling oracle")
