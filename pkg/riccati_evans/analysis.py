"""
Finding the zeros of an Evans function.

Every routine here takes ``evans``, any callable mapping a complex lambda to
a complex value, so the same machinery runs on a RiccatiEvans object, on the
direct oracle or on an analytic test function. Independent samples are
evaluated on a thread pool; reductions over them run in submission order, so
results do not depend on the worker count.
"""

import enum
import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from riccati_evans.exceptions import (
    ChartSingularity,
    ChartSingularityWarning,
    ClusterUnresolved,
    NonConvergentRefinement,
    OnPath,
    ResidualWarning,
    RiccatiEvansError,
    RootLost,
)

logger = logging.getLogger(__name__)

QUARTER_INSET = 1e-6
MAX_INCREMENT = math.pi / 2
WINDING_RESIDUAL_LIMIT = 0.05
WINDING_RESIDUAL_WARN = 0.01
BRACKET_RATIO = 1e-3
DEFAULT_RADIUS = 1e4
# tried in turn when a cell split lands on a zero or pole
SPLIT_FRACTIONS = (0.5, 0.4731, 0.5269, 0.4417)


def _map(func, items, workers=None):
    items = list(items)
    if len(items) > 1 and (workers is None or workers > 1):
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(func, items))
    return [func(item) for item in items]


@dataclass(frozen=True)
class EvansSample:
    lam: complex
    value: complex
    status: str = "ok"
    chart_label: str = ""

    @property
    def ok(self):
        return self.status == "ok"

    def row(self):
        return (
            self.lam.real,
            self.lam.imag,
            self.value.real,
            self.value.imag,
            self.chart_label,
            self.status,
        )


SAMPLE_COLUMNS = ("re_lambda", "im_lambda", "re_E", "im_E", "chart", "status")


def sample(evans, lam, chart_label=""):
    """
    Evaluate ``evans`` at ``lam`` and record failures as a status instead of
    raising.
    """
    lam = complex(lam)
    try:
        value = complex(evans(lam))
    except ChartSingularity as exc:
        warnings.warn(str(exc), ChartSingularityWarning)
        return EvansSample(
            lam, complex(math.nan, math.nan), "ChartSingularity", chart_label
        )
    except RiccatiEvansError as exc:
        logger.debug("Evans evaluation failed at %r: %s", lam, exc)
        return EvansSample(
            lam, complex(math.nan, math.nan), type(exc).__name__, chart_label
        )
    return EvansSample(lam, value, "ok", chart_label)


class ContourKind(enum.Enum):
    QUARTER_CIRCLE = "quarter_circle"
    RECTANGLE = "rectangle"
    SEGMENT = "segment"
    CIRCLE = "circle"


def _line(a, b):
    return lambda t: a + (b - a) * t


def _geometric(a, b):
    """Point moving from ``a`` to ``b`` on a ray through 0, log-spaced in t."""
    ratio = abs(b) / abs(a)
    return lambda t: a * ratio**t


def _arc(center, radius, start, stop):
    return lambda t: center + radius * np.exp(1j * (start + (stop - start) * t))


@dataclass(frozen=True)
class Contour:
    """
    A piecewise-smooth path in the lambda plane, traversed counterclockwise.

    The path is the concatenation of ``legs``, each a map from [0, 1]; a
    parameter s in [0, len(legs)] addresses leg int(s) at t = s - int(s).
    """

    kind: ContourKind
    spec: tuple
    legs: tuple = field(repr=False)
    n_min: int = 64

    @classmethod
    def quarter_circle(cls, radius, n_min=64, inset=QUARTER_INSET):
        """
        Boundary of the first-quadrant sector of ``radius``, kept ``inset`` away
        from lambda = 0. Axis legs are log-spaced so samples crowd the origin.
        """
        if not radius > inset:
            raise ValueError(f"radius must exceed the inset {inset!r}, got {radius!r}")
        legs = (
            _geometric(inset, radius),
            _arc(0.0, radius, 0.0, math.pi / 2),
            _geometric(1j * radius, 1j * inset),
            _arc(0.0, inset, math.pi / 2, 0.0),
        )
        return cls(ContourKind.QUARTER_CIRCLE, (radius, inset), legs, n_min)

    @classmethod
    def rectangle(cls, lo, hi, n_min=64):
        lo, hi = complex(lo), complex(hi)
        if not (hi.real > lo.real and hi.imag > lo.imag):
            raise ValueError(f"rectangle corners out of order: {lo!r}, {hi!r}")
        corners = (
            lo,
            complex(hi.real, lo.imag),
            hi,
            complex(lo.real, hi.imag),
        )
        legs = tuple(_line(a, b) for a, b in zip(corners, corners[1:] + corners[:1]))
        return cls(ContourKind.RECTANGLE, (lo, hi), legs, n_min)

    @classmethod
    def segment(cls, a, b, n_min=64):
        return cls(ContourKind.SEGMENT, (complex(a), complex(b)), (_line(a, b),), n_min)

    @classmethod
    def circle(cls, center, radius, n_min=64):
        legs = (_arc(complex(center), radius, 0.0, 2 * math.pi),)
        return cls(ContourKind.CIRCLE, (complex(center), radius), legs, n_min)

    @property
    def closed(self):
        return self.kind is not ContourKind.SEGMENT

    @property
    def length(self):
        return len(self.legs)

    def point(self, s):
        leg = min(int(s), self.length - 1)
        return complex(self.legs[leg](s - leg))

    def initial_parameters(self):
        per_leg = max(2, math.ceil(self.n_min / self.length))
        parameters = []
        for leg in range(self.length):
            parameters.extend(leg + np.linspace(0.0, 1.0, per_leg, endpoint=False))
        parameters.append(float(self.length))
        return parameters

    def describe(self):
        return {"kind": self.kind.value, "spec": list(self.spec), "n_min": self.n_min}


@dataclass(frozen=True)
class WindingResult:
    winding: int
    residual: float
    total_turns: float
    parameters: tuple
    lams: tuple
    values: tuple

    @property
    def samples_used(self):
        return len(self.lams)


def _check_path(lams, values, path_floor):
    magnitudes = np.abs(values)
    if not np.all(np.isfinite(values)):
        index = int(np.argmax(~np.isfinite(values)))
        raise OnPath(lams[index], values[index])
    floor = path_floor * magnitudes.max()
    if magnitudes.min() <= floor:
        index = int(np.argmin(magnitudes))
        raise OnPath(lams[index], values[index])


def winding_number(
    evans,
    contour,
    workers=None,
    max_samples=20000,
    path_floor=1e-12,
):
    """
    Winding number of evans(contour) about 0.

    Samples are bisected until every consecutive argument increment is below
    pi/2. A rounding residual of 0.05 or more is an error.
    """
    if not contour.closed:
        raise ValueError("winding numbers need a closed contour")
    parameters = contour.initial_parameters()
    lams = [contour.point(s) for s in parameters]
    values = [complex(v) for v in _map(evans, lams, workers)]

    while True:
        _check_path(lams, np.asarray(values), path_floor)
        steps = np.angle(np.asarray(values[1:]) / np.asarray(values[:-1]))
        coarse = np.flatnonzero(np.abs(steps) >= MAX_INCREMENT)
        if coarse.size == 0:
            break
        if len(parameters) + coarse.size > max_samples:
            raise NonConvergentRefinement(
                f"winding refinement exceeded {max_samples} samples on "
                f"{contour.kind.value} {contour.spec}"
            )
        midpoints = [(parameters[k] + parameters[k + 1]) / 2 for k in coarse]
        new_lams = [contour.point(s) for s in midpoints]
        new_values = [complex(v) for v in _map(evans, new_lams, workers)]
        for offset, (k, s, lam, value) in enumerate(
            zip(coarse, midpoints, new_lams, new_values)
        ):
            position = k + 1 + offset
            parameters.insert(position, s)
            lams.insert(position, lam)
            values.insert(position, value)

    # the closing sample repeats the first point of the path
    total = float(np.sum(steps)) / (2 * math.pi)
    winding = int(round(total))
    residual = abs(total - winding)
    logger.debug(
        "winding on %s %s: %.6f turns from %d samples",
        contour.kind.value,
        contour.spec,
        total,
        len(lams),
    )
    if residual >= WINDING_RESIDUAL_LIMIT:
        raise NonConvergentRefinement(
            f"winding {total:.4f} is not close to an integer "
            f"(residual {residual:.3f})"
        )
    if residual >= WINDING_RESIDUAL_WARN:
        warnings.warn(
            f"winding rounding residual {residual:.3f} on "
            f"{contour.kind.value} {contour.spec}",
            ResidualWarning,
        )
    return WindingResult(
        winding, residual, total, tuple(parameters), tuple(lams), tuple(values)
    )


def chart_corrected_winding(evans, contour, workers=None, **options):
    """
    Winding of ``evans`` on ``contour`` and the winding of its chart factor.

    E_T counts zeros minus chart poles; ``evans.chart_factor`` (det X^u det
    X^s) carries those poles as zeros, so the sum of the two windings counts
    the zeros of the Evans function. Callables without a chart factor get a
    correction of 0.
    """
    result = winding_number(evans, contour, workers, **options)
    factor = getattr(evans, "chart_factor", None)
    if factor is None:
        return result, 0
    correction = winding_number(factor, contour, workers, **options).winding
    logger.debug(
        "chart factor winds %d times on %s %s",
        correction,
        contour.kind.value,
        contour.spec,
    )
    return result, correction


def winding_report(result, contour, chart_winding=None):
    report = {
        "status": "ok",
        "contour": contour.describe(),
        "samples_used": result.samples_used,
        "winding": result.winding,
        "rounding_residual": result.residual,
        "total_turns": result.total_turns,
    }
    if chart_winding is not None:
        report["chart_factor_winding"] = chart_winding
        report["evans_zeros"] = result.winding + chart_winding
    return report


@dataclass(frozen=True)
class RootRecord:
    lam: complex
    c: Optional[float]
    residual: float
    multiplicity: int = 1

    def row(self):
        c = math.nan if self.c is None else self.c
        return (c, self.lam.real, self.lam.imag, self.residual, self.multiplicity)


ROOT_COLUMNS = ("c", "re_lambda", "im_lambda", "residual", "multiplicity")


def _derivative(func, lam):
    step = 1e-6 * max(1.0, abs(lam))
    return (func(lam + step) - func(lam - step)) / (2 * step)


def newton_polish(evans, lam, tol=1e-10, max_iterations=50, radius=None):
    """
    Newton's method on ``evans`` from ``lam`` with a central-difference
    derivative. Leaving the disc of ``radius`` about the start is a failure.
    """
    start = lam = complex(lam)
    for iteration in range(max_iterations):
        value = complex(evans(lam))
        slope = complex(_derivative(evans, lam))
        if slope == 0 or not np.isfinite(slope):
            raise NonConvergentRefinement(f"zero derivative at lambda = {lam!r}")
        step = value / slope
        lam -= step
        if radius is not None and abs(lam - start) > radius:
            raise NonConvergentRefinement(
                f"Newton left the search disc around {start!r} (now at {lam!r})"
            )
        if abs(step) <= tol * max(1.0, abs(lam)):
            logger.debug("Newton converged to %r in %d steps", lam, iteration + 1)
            return lam
    raise NonConvergentRefinement(
        f"Newton did not converge from {start!r} in {max_iterations} steps"
    )


@dataclass(frozen=True)
class RootSearch:
    roots: tuple
    poles: tuple


def _split_cell(lo, hi, fraction):
    mid = complex(
        lo.real + fraction * (hi.real - lo.real),
        lo.imag + fraction * (hi.imag - lo.imag),
    )
    return [
        (lo, mid),
        (complex(mid.real, lo.imag), complex(hi.real, mid.imag)),
        (complex(lo.real, mid.imag), complex(mid.real, hi.imag)),
        (mid, hi),
    ]


def _cell_winding(evans, lo, hi, n_min, workers):
    return winding_number(evans, Contour.rectangle(lo, hi, n_min), workers).winding


def _quadrisect(evans, lo, hi, n_min, workers):
    """The four sub-cells with their windings, avoiding splits through roots."""
    for fraction in SPLIT_FRACTIONS:
        cells = _split_cell(lo, hi, fraction)
        try:
            return [
                (a, b, _cell_winding(evans, a, b, n_min, workers))
                for a, b in cells
            ]
        except OnPath:
            continue
    raise NonConvergentRefinement(
        f"every split of cell [{lo!r}, {hi!r}] passes through a zero or pole"
    )


def locate_roots(
    evans,
    lo,
    hi,
    tol=1e-10,
    coarse_tol=None,
    min_cell=1e-6,
    n_min=32,
    c=None,
    workers=None,
):
    """
    Zeros and poles of ``evans`` inside the rectangle [lo, hi].

    Cells are quadrisected until their winding is 0 or +-1 and their diameter
    is below ``coarse_tol``, then each point is polished by Newton (on 1/E for
    poles). A cell still winding more than once at ``min_cell`` is an error.
    """
    lo, hi = complex(lo), complex(hi)
    if coarse_tol is None:
        coarse_tol = 0.05 * abs(hi - lo)
    winding = _cell_winding(evans, lo, hi, n_min, workers)
    pending = [(lo, hi, winding)]
    roots, poles = [], []

    def inverse(lam):
        return 1.0 / complex(evans(lam))

    while pending:
        a, b, w = pending.pop(0)
        if w == 0:
            continue
        diameter = abs(b - a)
        if abs(w) == 1 and diameter < coarse_tol:
            target = evans if w > 0 else inverse
            lam = newton_polish(target, (a + b) / 2, tol, radius=2 * diameter)
            # poles carry |1/E| as their residual
            record = RootRecord(lam, c, abs(complex(target(lam))), 1)
            (roots if w > 0 else poles).append(record)
            continue
        if diameter < min_cell:
            raise ClusterUnresolved((a, b), w)
        pending.extend(_quadrisect(evans, a, b, n_min, workers))

    def key(record):
        return (record.lam.real, record.lam.imag)

    logger.info(
        "found %d zero(s) and %d pole(s) in [%r, %r]", len(roots), len(poles), lo, hi
    )
    return RootSearch(tuple(sorted(roots, key=key)), tuple(sorted(poles, key=key)))


def mirror_region(lo, hi):
    """The complex-conjugate image of the rectangle [lo, hi]."""
    lo, hi = complex(lo), complex(hi)
    return complex(lo.real, -hi.imag), complex(hi.real, -lo.imag)


def conjugate_closed(roots, mirrored, tol=1e-8):
    """
    True when every root off the real axis has its conjugate among
    ``mirrored``.
    """
    for record in roots:
        if abs(record.lam.imag) <= tol:
            continue
        conjugate = record.lam.conjugate()
        if not any(abs(other.lam - conjugate) <= tol for other in mirrored):
            return False
    return True


@dataclass(frozen=True)
class Sweep:
    samples: tuple
    brackets: tuple

    @property
    def lams(self):
        return np.array([s.lam.real for s in self.samples])

    @property
    def values(self):
        return np.array([s.value for s in self.samples])


def find_brackets(lams, values, ratio=BRACKET_RATIO):
    """
    Intervals of a real sweep that may hold a zero.

    An interval qualifies when Re E changes sign together with Im E (or Im E
    is negligible at both ends), or when |E| has a local minimum below
    ``ratio`` times the median of |E|. Failed (nan) samples break the scan.
    """
    lams = np.asarray(lams, dtype=float)
    values = np.asarray(values, dtype=complex)
    magnitudes = np.abs(values)
    finite = np.isfinite(magnitudes)
    if not finite.any():
        return ()
    scale = magnitudes[finite].max()
    median = np.median(magnitudes[finite])
    negligible = 1e-10 * scale
    brackets = []
    for k in range(len(lams) - 1):
        if not (finite[k] and finite[k + 1]):
            continue
        a, b = values[k], values[k + 1]
        real_flip = a.real * b.real <= 0
        imag_flip = a.imag * b.imag <= 0
        imag_flat = abs(a.imag) <= negligible and abs(b.imag) <= negligible
        if real_flip and (imag_flip or imag_flat):
            brackets.append((lams[k], lams[k + 1]))
    for k in range(1, len(lams) - 1):
        if not finite[k - 1 : k + 2].all():
            continue
        if (
            magnitudes[k] < magnitudes[k - 1]
            and magnitudes[k] < magnitudes[k + 1]
            and magnitudes[k] < ratio * median
        ):
            brackets.append((lams[k - 1], lams[k + 1]))
    return tuple(_merge(sorted(brackets)))


def _merge(intervals):
    merged = []
    for lo, hi in intervals:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return [(float(lo), float(hi)) for lo, hi in merged]


def sweep_real(
    evans, lo, hi, n, chart_label="", workers=None, bracket_ratio=BRACKET_RATIO
):
    """
    Sample ``evans`` at ``n`` equispaced real points of [lo, hi] and flag
    root brackets; failing samples are kept with their error as status.
    """
    if n < 2:
        raise ValueError(f"a sweep needs at least 2 samples, got {n}")
    lams = np.linspace(lo, hi, n)
    samples = _map(lambda lam: sample(evans, lam, chart_label), lams, workers)
    failures = sum(not s.ok for s in samples)
    if failures:
        logger.info("%d of %d sweep samples failed", failures, n)
    brackets = find_brackets(lams, [s.value for s in samples], bracket_ratio)
    return Sweep(tuple(samples), brackets)


def real_root_refine(evans, bracket, xtol=1e-12, pole_ratio=1e-3):
    """
    Refine a real root inside ``bracket`` with brentq on Re(E * conj(a)), a
    the secant slope of E across the bracket.

    A bracket whose refined point has |E| above ``pole_ratio`` times the
    end-point values holds a pole, not a zero.
    """
    lo, hi = (float(x) for x in bracket)
    e_lo, e_hi = complex(evans(lo)), complex(evans(hi))
    slope = (e_hi - e_lo) / (hi - lo)

    def projected(x):
        return (complex(evans(x)) * slope.conjugate()).real

    h_lo, h_hi = (e_lo * slope.conjugate()).real, (e_hi * slope.conjugate()).real
    if h_lo * h_hi > 0:
        raise NonConvergentRefinement(
            f"no sign change of the projected Evans function on [{lo}, {hi}]"
        )
    root = brentq(projected, lo, hi, xtol=xtol)
    residual = abs(complex(evans(root)))
    if residual > pole_ratio * max(abs(e_lo), abs(e_hi)):
        raise NonConvergentRefinement(
            f"bracket [{lo}, {hi}] converged to lambda = {root!r} with "
            f"|E| = {residual:.3e}; this is a pole"
        )
    return RootRecord(complex(root), None, residual, 1)


@dataclass(frozen=True)
class ArgumentField:
    re_axis: np.ndarray
    im_axis: np.ndarray
    phase: np.ndarray
    status: np.ndarray

    def rows(self):
        for i, x in enumerate(self.re_axis):
            for j, y in enumerate(self.im_axis):
                yield (x, y, self.phase[i, j], self.status[i, j])

    def singularities(self):
        """
        Plaquettes around which the phase turns by a full circle, as
        (re, im, +1 for a zero / -1 for a pole).
        """
        found = []
        phase = self.phase
        for i in range(len(self.re_axis) - 1):
            for j in range(len(self.im_axis) - 1):
                loop = [
                    phase[i, j],
                    phase[i + 1, j],
                    phase[i + 1, j + 1],
                    phase[i, j + 1],
                ]
                if not np.all(np.isfinite(loop)):
                    continue
                turns = np.angle(np.exp(1j * np.diff(loop + loop[:1]))).sum()
                index = int(round(turns / (2 * math.pi)))
                if index:
                    found.append(
                        (
                            (self.re_axis[i] + self.re_axis[i + 1]) / 2,
                            (self.im_axis[j] + self.im_axis[j + 1]) / 2,
                            index,
                        )
                    )
        return found


FIELD_COLUMNS = ("re_lambda", "im_lambda", "arg_E", "status")


def argument_field(evans, lo, hi, nx, ny, workers=None):
    """Principal argument of ``evans`` on an nx by ny grid over [lo, hi]."""
    lo, hi = complex(lo), complex(hi)
    re_axis = np.linspace(lo.real, hi.real, nx)
    im_axis = np.linspace(lo.imag, hi.imag, ny)
    points = [complex(x, y) for x in re_axis for y in im_axis]
    samples = _map(lambda lam: sample(evans, lam), points, workers)
    phase = np.array([np.angle(s.value) if s.ok else math.nan for s in samples])
    status = np.array([s.status for s in samples], dtype=object)
    return ArgumentField(
        re_axis, im_axis, phase.reshape(nx, ny), status.reshape(nx, ny)
    )


@dataclass(frozen=True)
class RootTrack:
    records: tuple
    crossing: Optional[tuple]


def _relocate(evans, lam, c, halfwidth, tol):
    lo = lam - complex(halfwidth, halfwidth)
    hi = lam + complex(halfwidth, halfwidth)
    try:
        roots = locate_roots(evans, lo, hi, tol=tol, c=c).roots
    except RiccatiEvansError:
        roots = ()
    if not roots:
        raise RootLost(c, lam)
    return min(roots, key=lambda record: abs(record.lam - lam)).lam


def track_root_in_c(
    waves, seed_root, evans_factory, tol=1e-10, step_limit=0.1, relocate_width=0.05
):
    """
    Follow a root along a continuation in c.

    ``waves`` is the continuation (first entry at the seed's speed),
    ``evans_factory`` turns a wave into an Evans callable. Each root is
    Newton-polished from its predecessor, falling back to a local search;
    the crossing is the first (c_k, c_k+1) across which Re lambda changes
    sign.
    """
    records = [
        RootRecord(
            seed_root.lam,
            waves[0].params.c,
            seed_root.residual,
            seed_root.multiplicity,
        )
    ]
    lam = complex(seed_root.lam)
    for wave in waves[1:]:
        c = wave.params.c
        evans = evans_factory(wave)
        try:
            lam = newton_polish(evans, lam, tol, radius=step_limit)
        except RiccatiEvansError as exc:
            logger.info("Newton failed at c = %.10g (%s); searching locally", c, exc)
            lam = _relocate(evans, lam, c, relocate_width, tol)
        records.append(RootRecord(lam, c, abs(complex(evans(lam))), 1))
        logger.info("c = %.10g: lambda* = %r", c, lam)

    crossing = None
    for first, second in zip(records, records[1:]):
        if first.lam.real * second.lam.real <= 0:
            crossing = (first.c, second.c)
            break
    return RootTrack(tuple(records), crossing)
