"""
WSGI config for the scenario bounds project.

Only the Django admin is served, for browsing recorded runs.
"""
import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.local")

application = get_wsgi_application()
