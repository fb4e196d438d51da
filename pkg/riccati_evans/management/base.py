"""
Shared plumbing for the riccati-evans management commands.

Every command resolves a RunConfig from settings, ``--config`` and its own
flags, writes its results under ``--out`` and maps failures to exit codes:
1 for usage and configuration problems, 2 for numerical failures.
"""

import sys
import warnings

from django.core.exceptions import ImproperlyConfigured
from django.core.management.base import BaseCommand, CommandError, CommandParser

from riccati_evans.conf import RunConfig, convert_flag
from riccati_evans.exceptions import RiccatiEvansError
from riccati_evans.grassmann import RiccatiEvans, chart_by_label
from riccati_evans.waves import compute_wave, load_profile

USAGE_ERROR = 1
NUMERICAL_ERROR = 2


class UsageParser(CommandParser):
    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")
        raise CommandError(f"Error: {message}", returncode=USAGE_ERROR)


def _optional_float(text):
    return convert_flag("u_inf_target", text)


class EvansCommand(BaseCommand):
    """
    Base class for commands driving the wave and Evans pipelines.

    Subclasses set ``default_stem`` and implement ``run()``; ``self.config``
    is the resolved RunConfig and ``self.digest`` its hash.
    """

    default_stem = "result"
    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.__class__ = UsageParser
        return parser

    def add_arguments(self, parser):
        parser.add_argument("--config", help="INI file with run configuration.")
        parser.add_argument("--c", type=float, dest="c", help="Wave speed.")
        parser.add_argument("--epsilon", type=float, help="Singular parameter.")
        parser.add_argument(
            "--u-inf",
            type=_optional_float,
            dest="u_inf_target",
            help="Right background state u_inf, or 'none' to leave it free.",
        )
        parser.add_argument("--profile", help="Read the wave from a profile file.")
        parser.add_argument("--chart", help="Riccati chart label.")
        parser.add_argument("--out", help="Output directory.")
        parser.add_argument(
            "--stem", help="Base name of the files written by this command."
        )
        parser.add_argument("--tol-newton", type=float, dest="tol_newton")
        parser.add_argument("--tol-bc", type=float, dest="tol_bc")
        parser.add_argument("--tol-w", type=float, dest="tol_w")
        parser.add_argument("--rtol", type=float)
        parser.add_argument("--atol", type=float)
        parser.add_argument(
            "--workers",
            type=int,
            default=None,
            help="Number of parallel workers for independent samples.",
        )

    def set_options(self, **options):
        """Set instance variables based on an options dict."""
        self.verbosity = options["verbosity"]
        self.profile_path = options.get("profile")
        keys = set(RunConfig.keys())
        overrides = {k: v for k, v in options.items() if k in keys}
        self.config = RunConfig.resolve(options.get("config"), overrides)
        self.digest = self.config.digest()
        self.stem = options.get("stem") or self.default_stem

    def log(self, msg, level=2):
        """Small log helper."""
        if self.verbosity >= level:
            self.stdout.write(msg)

    def execute(self, *args, **options):
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                result = super().execute(*args, **options)
        except ImproperlyConfigured as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc
        except RiccatiEvansError as exc:
            raise CommandError(
                f"{type(exc).__name__}: {exc}", returncode=NUMERICAL_ERROR
            ) from exc
        for warning in caught:
            if options.get("verbosity", 1) >= 1:
                self.stderr.write(f"{warning.category.__name__}: {warning.message}")
        return result

    def handle(self, *args, **options):
        self.set_options(**options)
        self.out_dir = self.config.output_dir()
        return self.run()

    def run(self):
        raise NotImplementedError("subclasses of EvansCommand must provide run()")

    def path(self, suffix, stem=None):
        return self.out_dir / f"{stem or self.stem}{suffix}"

    def wave(self):
        if self.profile_path:
            wave = load_profile(self.profile_path)
            self.log(f"Read type {wave.wave_type.value} wave from {self.profile_path}")
            return wave
        params = self.config.model_params()
        self.log(
            f"Computing wave at c={params.c:g}, epsilon={params.epsilon:g}", level=1
        )
        return compute_wave(params, self.config.solver_settings())

    def evans_factory(self):
        chart = chart_by_label(self.config.chart)
        options = self.config.evans_options()
        return lambda wave: RiccatiEvans(wave, chart, **options)
