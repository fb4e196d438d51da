"""
``riccati-evans <command> [options]``: the management commands without a
Django project. A project's own settings are used when
DJANGO_SETTINGS_MODULE is set.
"""

import os
import sys

import django
from django.conf import settings
from django.core.management import ManagementUtility

COMMANDS = {
    "compute-wave": "compute_wave",
    "continue": "continue_wave",
    "classify": "classify",
    "spectrum": "spectrum",
    "evans-sweep": "evans_sweep",
    "winding": "winding",
    "locate-roots": "locate_roots",
    "track-root": "track_root",
    "argument-field": "argument_field",
}


def main(argv=None):
    argv = list(sys.argv if argv is None else argv)
    if not settings.configured and "DJANGO_SETTINGS_MODULE" not in os.environ:
        settings.configure(
            INSTALLED_APPS=["riccati_evans"],
            LOGGING_CONFIG=None,
        )
    django.setup()
    if len(argv) > 1:
        argv[1] = COMMANDS.get(argv[1], argv[1])
    utility = ManagementUtility(argv)
    utility.prog_name = "riccati-evans"
    utility.execute()


if __name__ == "__main__":
    main()
