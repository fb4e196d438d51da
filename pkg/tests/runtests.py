#!/usr/bin/env python
"""
Test runner for django-riccati-evans
"""

import argparse
import os
import sys

import django
from django.conf import settings
from django.test.utils import get_runner


def setup_test_environment():
    """Setup Django test environment"""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "evans_tests.settings")
    # run against the checkout when the package is not installed
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

    django.setup()


def run_tests(test_path=None, exclude_tags=None, tags=None):
    """Run the test suite"""
    setup_test_environment()
    TestRunner = get_runner(settings)
    test_runner = TestRunner(
        verbosity=2, interactive=True, exclude_tags=exclude_tags, tags=tags
    )

    if test_path:
        test_labels = [test_path]
    else:
        # Run all tests if no specific path provided
        test_labels = ["evans_tests"]

    failures = test_runner.run_tests(test_labels)
    if failures:
        sys.exit(bool(failures))


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Run Django tests")
    parser.add_argument(
        "test_path",
        nargs="?",
    )
    parser.add_argument(
        "--exclude-tag",
        action="append",
        dest="exclude_tags",
        help="Skip tests with this tag, e.g. 'slow'.",
    )
    parser.add_argument("--tag", action="append", dest="tags")
    args = parser.parse_args()

    run_tests(args.test_path, args.exclude_tags, args.tags)
