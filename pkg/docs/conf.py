# Sphinx configuration: https://www.sphinx-doc.org/en/master/usage/configuration.html
import os
import sys
from pathlib import Path

import django

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
# autodoc imports the apps, which needs a configured Django
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.test")
django.setup()

project = "Scenario Bounds"
copyright = "2022, Scenario Bounds contributors"
author = "Scenario Bounds contributors"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
]
autodoc_member_order = "bysource"

exclude_patterns = ["_build"]

html_theme = "alabaster"
