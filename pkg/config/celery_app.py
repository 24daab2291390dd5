"""Celery application for sampling shards. Eager unless ``CELERY_TASK_ALWAYS_EAGER`` is off."""
import os

from celery import Celery

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.local")

app = Celery("scenario_bounds")
# every CELERY_* setting, e.g. CELERY_TASK_ALWAYS_EAGER -> task_always_eager
app.config_from_object("django.conf:settings", namespace="CELERY")
# finds scenario_bounds/bounds/tasks.py
app.autodiscover_tasks()
