"""
Run configuration.

Values resolve in order, later sources winning: the defaults below, the
``RICCATI_EVANS`` dict in Django settings, an INI file and finally command
flags. The canonical INI rendering of the resolved configuration is what
``digest()`` hashes, so identical inputs stamp identical result files.
"""

import configparser
import dataclasses
import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

from riccati_evans.grassmann import CHARTS
from riccati_evans.model import ModelParams
from riccati_evans.waves import SolverSettings

SECTIONS = ("model", "solver", "riccati", "analysis", "output")
METHODS = ("auto", "DOP853", "RK45", "Radau", "BDF", "LSODA")


def _setting(section, kind, default):
    return field(default=default, metadata={"section": section, "kind": kind})


@dataclass(frozen=True)
class RunConfig:
    epsilon: float = _setting("model", "float", 0.01)
    c: float = _setting("model", "float", 1.0)
    u_inf_target: Optional[float] = _setting("model", "optional_float", 1.0)

    length_minus: float = _setting("solver", "float", 50.0)
    length_plus: float = _setting("solver", "float", 50.0)
    tol_newton: float = _setting("solver", "float", 1e-9)
    tol_bc: float = _setting("solver", "float", 1e-7)
    tol_w: float = _setting("solver", "float", 1e-6)
    kappa: float = _setting("solver", "float", 0.1)
    max_nodes: int = _setting("solver", "int", 300000)
    seed_nodes: int = _setting("solver", "int", 2001)
    max_halvings: int = _setting("solver", "int", 6)

    chart: str = _setting("riccati", "str", "paper")
    z0: float = _setting("riccati", "float", 0.0)
    rtol: float = _setting("riccati", "float", 1e-10)
    atol: float = _setting("riccati", "float", 1e-12)
    blowup: float = _setting("riccati", "float", 1e8)
    relaxation: float = _setting("riccati", "float", 10.0)
    method: str = _setting("riccati", "str", "auto")

    sweep_lo: float = _setting("analysis", "float", -0.5)
    sweep_hi: float = _setting("analysis", "float", 0.5)
    sweep_n: int = _setting("analysis", "int", 201)
    radius: float = _setting("analysis", "float", 10.0)
    n_min: int = _setting("analysis", "int", 64)
    region: tuple = _setting("analysis", "floats", (0.0, 10.0, 0.0, 10.0))
    grid_nx: int = _setting("analysis", "int", 41)
    grid_ny: int = _setting("analysis", "int", 41)
    k_min: float = _setting("analysis", "float", -20.0)
    k_max: float = _setting("analysis", "float", 20.0)
    k_samples: int = _setting("analysis", "int", 1001)
    c_end: float = _setting("analysis", "float", 0.65)
    steps: int = _setting("analysis", "int", 10)
    root_tol: float = _setting("analysis", "float", 1e-10)
    bracket_ratio: float = _setting("analysis", "float", 1e-3)
    workers: Optional[int] = _setting("analysis", "optional_int", None)

    out: str = _setting("output", "str", "riccati-evans-out")
    seed: int = _setting("output", "int", 0)

    def __post_init__(self):
        self.validate()

    @classmethod
    def keys(cls):
        return [f.name for f in dataclasses.fields(cls)]

    def validate(self):
        positive = (
            "tol_newton",
            "tol_bc",
            "tol_w",
            "kappa",
            "rtol",
            "atol",
            "blowup",
            "radius",
            "root_tol",
            "bracket_ratio",
            "length_minus",
            "length_plus",
            "c",
        )
        for name in positive:
            if not getattr(self, name) > 0:
                raise ImproperlyConfigured(
                    f"{name} must be positive, got {getattr(self, name)!r}"
                )
        if not self.epsilon >= 0:
            raise ImproperlyConfigured(
                f"epsilon must be non-negative, got {self.epsilon!r}"
            )
        if self.u_inf_target is not None and not self.u_inf_target > 0:
            raise ImproperlyConfigured(
                f"u_inf_target must be positive or none, got {self.u_inf_target!r}"
            )
        if self.chart not in CHARTS:
            raise ImproperlyConfigured(
                f"Unknown chart {self.chart!r}; choose one of "
                f"{', '.join(sorted(CHARTS))}"
            )
        if self.method not in METHODS:
            raise ImproperlyConfigured(f"Unknown integrator {self.method!r}")
        if self.workers is not None and self.workers < 1:
            raise ImproperlyConfigured(
                f"workers must be at least 1, got {self.workers}"
            )
        if len(self.region) != 4:
            raise ImproperlyConfigured(
                "region takes four numbers: re_lo, re_hi, im_lo, im_hi"
            )
        re_lo, re_hi, im_lo, im_hi = self.region
        if not (re_hi > re_lo and im_hi > im_lo):
            raise ImproperlyConfigured(f"region {self.region!r} is empty")
        if not self.k_max > self.k_min or self.k_samples < 1:
            raise ImproperlyConfigured("the k-range is empty")
        for name in ("sweep_n", "n_min", "grid_nx", "grid_ny", "seed_nodes"):
            if getattr(self, name) < 1:
                raise ImproperlyConfigured(f"{name} must be at least 1")

    @classmethod
    def resolve(cls, path=None, overrides=None):
        values = {}
        if settings.configured:
            values.update(getattr(settings, "RICCATI_EVANS", {}))
        if path is not None:
            values.update(read_ini(path))
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        unknown = set(values) - set(cls.keys())
        if unknown:
            raise ImproperlyConfigured(
                f"Unknown configuration keys: {', '.join(sorted(unknown))}"
            )
        return cls(**values)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_ini(self):
        lines = []
        for section in SECTIONS:
            lines.append(f"[{section}]")
            for f in dataclasses.fields(self):
                if f.metadata["section"] == section:
                    value = _render(f.metadata["kind"], getattr(self, f.name))
                    lines.append(f"{f.name} = {value}")
            lines.append("")
        return "\n".join(lines)

    @classmethod
    def from_ini(cls, text):
        return cls(**parse_ini(text))

    def digest(self):
        return hashlib.sha256(self.to_ini().encode("utf-8")).hexdigest()

    def model_params(self, **changes):
        u_inf = 1.0 if self.u_inf_target is None else self.u_inf_target
        return ModelParams(self.epsilon, self.c, u_inf).replace(**changes)

    def solver_settings(self):
        return SolverSettings(
            length_minus=self.length_minus,
            length_plus=self.length_plus,
            tol_newton=self.tol_newton,
            tol_bc=self.tol_bc,
            tol_w=self.tol_w,
            kappa=self.kappa,
            max_nodes=self.max_nodes,
            u_inf_target=self.u_inf_target,
            seed_nodes=self.seed_nodes,
            max_halvings=self.max_halvings,
        )

    def evans_options(self):
        return {
            "z0": self.z0,
            "rtol": self.rtol,
            "atol": self.atol,
            "blowup": self.blowup,
            "relaxation": self.relaxation,
            "method": self.method,
        }

    @property
    def region_corners(self):
        re_lo, re_hi, im_lo, im_hi = self.region
        return complex(re_lo, im_lo), complex(re_hi, im_hi)

    def output_dir(self):
        path = Path(self.out)
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ImproperlyConfigured(f"Cannot create output directory {path}: {exc}")
        if not os.access(path, os.W_OK):
            raise ImproperlyConfigured(f"Output directory {path} is not writable")
        return path


def _render(kind, value):
    if value is None:
        return "none"
    if kind in ("float", "optional_float"):
        return format(float(value), ".17g")
    if kind == "floats":
        return ", ".join(format(float(item), ".17g") for item in value)
    return str(value)


def _convert(name, kind, text):
    text = text.strip()
    try:
        if kind.startswith("optional_"):
            if text.lower() == "none":
                return None
            kind = kind[len("optional_") :]
        if kind == "float":
            return float(text)
        if kind == "int":
            return int(text)
        if kind == "floats":
            return tuple(float(item) for item in text.split(","))
    except ValueError:
        raise ImproperlyConfigured(f"Bad value for {name}: {text!r}")
    return text


def parse_ini(text):
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ImproperlyConfigured(f"Malformed configuration file: {exc}")
    kinds = {f.name: f.metadata for f in dataclasses.fields(RunConfig)}
    values = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ImproperlyConfigured(f"Unknown configuration section [{section}]")
        for name, text_value in parser.items(section):
            if name not in kinds or kinds[name]["section"] != section:
                raise ImproperlyConfigured(f"Unknown key {name!r} in [{section}]")
            values[name] = _convert(name, kinds[name]["kind"], text_value)
    return values


def read_ini(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ImproperlyConfigured(f"Cannot read configuration file {path}: {exc}")
    return parse_ini(text)


def convert_flag(name, text):
    """Parse a command-line string for configuration key ``name``."""
    kinds = {f.name: f.metadata["kind"] for f in dataclasses.fields(RunConfig)}
    return _convert(name, kinds[name], text)
