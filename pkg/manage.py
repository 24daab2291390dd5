#!/usr/bin/env python
"""Runs the scenario bounds commands: epsilon, bound, simulate and validate."""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.local")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as error:
        raise ImportError(
            "Django is not importable; install requirements/local.txt into the active environment"
        ) from error
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
