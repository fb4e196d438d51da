"""
pytest bootstrap mirroring tests/runtests.py: point Django at the test
settings and set it up before test collection.
"""

import os
import sys

import django

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "tests"))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "evans_tests.settings")
django.setup()
