"""Settings for running the commands on a workstation."""
from .base import *  # noqa
from .base import LOGGING, env

DEBUG = True
SECRET_KEY = env(
    "DJANGO_SECRET_KEY",
    default="p1kQ8o0bWb3fXc2nV9mZr4TtLs6yHe7uJd5aGk0qNw2xRv8cBz3sEf1hYl9iMo4D",
)
ALLOWED_HOSTS = ["localhost", "127.0.0.1"]

CACHES = {"default": {"BACKEND": "django.core.cache.backends.dummy.DummyCache"}}

# per-week estimator output
LOGGING["loggers"]["scenario_bounds"]["level"] = env(
    "SCENARIO_BOUNDS_LOG_LEVEL", default="DEBUG"
)

# shell_plus for poking at recorded runs
INSTALLED_APPS += ["django_extensions"]  # noqa F405
