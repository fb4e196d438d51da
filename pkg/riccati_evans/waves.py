"""
Travelling-wave profiles of the haptotaxis model.

A wave is built in two stages. The singular composite glues orbits of the
desingularised reduced flow to a fast fibre (when the orbit has to pass the
canard point); its smoothed lift seeds a collocation solve of the full slow
system at eps > 0. The collocation problem folds the truncated line
[-L_minus, L_plus] onto t in [0, 1] so both halves share one mesh and the
phase condition sits at z = 0.
"""

import enum
import json
import logging
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import linalg
from scipy.integrate import solve_bvp, solve_ivp
from scipy.interpolate import CubicHermiteSpline, make_interp_spline
from scipy.optimize import brentq

from riccati_evans import emit
from riccati_evans.exceptions import (
    BadProfileFile,
    ContinuationStuck,
    DomainTooShort,
    FoldCollision,
    NoConvergence,
    OutOfDomain,
    ProfileWarning,
    SingularLimit,
)
from riccati_evans.model import (
    ModelParams,
    canard_point,
    critical_manifold_lift,
    desingularised_rhs,
    equilibria,
    fold_value,
    jump_target,
    slow_jacobian,
    slow_rhs,
)

logger = logging.getLogger(__name__)

PROFILE_SCHEMA = "riccati-evans-profile"
PROFILE_VERSION = 1
PROFILE_COLUMNS = ("z", "u", "y", "v", "w")
LIENARD_SPLINE_ORDER = 5


class WaveType(enum.Enum):
    I = "I"  # noqa: E741
    II = "II"
    III = "III"
    IV = "IV"


@dataclass(frozen=True)
class SolverSettings:
    length_minus: float = 50.0
    length_plus: float = 50.0
    tol_newton: float = 1e-9
    tol_bc: float = 1e-7
    tol_w: float = 1e-6
    kappa: float = 0.1
    max_nodes: int = 300000
    # None keeps u(-L_minus) at its seed value and leaves u_inf free
    u_inf_target: Optional[float] = 1.0
    seed_nodes: int = 2001
    max_halvings: int = 6


@dataclass(frozen=True, eq=False)
class WaveProfile:
    """
    A converged travelling wave: ``states`` has shape (4, n) with rows
    (u, y, v, w) sampled on the strictly increasing slow-variable ``grid``.
    """

    grid: np.ndarray
    states: np.ndarray
    params: ModelParams
    wave_type: WaveType
    bvp_residual: float = 0.0

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise ValueError("wave grid must be strictly increasing")
        if states.shape != (4, grid.size):
            raise ValueError(
                f"states must have shape (4, {grid.size}), got {states.shape}"
            )
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "states", states)

    @property
    def u(self):
        return self.states[0]

    @property
    def y(self):
        return self.states[1]

    @property
    def v(self):
        return self.states[2]

    @property
    def w(self):
        return self.states[3]

    @cached_property
    def _spline(self):
        return CubicHermiteSpline(
            self.grid, self.states, slow_rhs(self.states, self.params), axis=1
        )

    def interpolant(self):
        """
        C1 cubic Hermite interpolant through the nodes, using the exact slope
        of the slow system at every node.
        """
        return self._spline

    def state_at(self, z):
        lo, hi = self.grid[0], self.grid[-1]
        if not lo <= z <= hi:
            raise OutOfDomain(z, lo, hi)
        return self._spline(z)

    def u_prime(self):
        return self.v

    def w_prime(self):
        return slow_rhs(self.states, self.params)[3]

    def lienard_residual(self):
        """
        Largest deviation of y from eps*w' - v*w + c*w with w' taken by
        differentiating a quintic interpolating spline through the grid data.
        """
        eps, c = self.params.epsilon, self.params.c
        order = min(LIENARD_SPLINE_ORDER, self.grid.size - 1)
        w_prime = make_interp_spline(self.grid, self.w, k=order).derivative()(
            self.grid
        )
        lienard = eps * w_prime - self.v * self.w + c * self.w
        return float(np.max(np.abs(self.y - lienard)))

    def boundary_residual(self):
        """
        Size of the end-state components that must decay exponentially: the
        fast residual of the left end and (y, v, w) at the right end. The
        left tail of u is algebraic and is not measured.
        """
        left = self.states[:, 0]
        right = self.states[:, -1]
        c = self.params.c
        u, y, v, w = left
        fast_left = max(abs(-c * v + u**2 * w), abs(y + v * w - c * w))
        return float(max(fast_left, np.max(np.abs(right[1:]))))

    def shifted(self, delta):
        return replace(self, grid=self.grid + delta)

    def rows(self):
        return np.column_stack([self.grid, self.states.T])


@dataclass(frozen=True, eq=False)
class ReducedSegment:
    z: np.ndarray
    u: np.ndarray
    w: np.ndarray
    repelling: bool = False

    @property
    def orientation(self):
        """+1 when zbar runs with z along the segment, -1 when reversed."""
        return -1 if self.repelling else 1

    def at(self, z):
        return np.interp(z, self.z, self.u), np.interp(z, self.z, self.w)


@dataclass(frozen=True)
class JumpRecord:
    z: float
    u: float
    y: float
    v_minus: float
    w_minus: float
    v_plus: float
    w_plus: float


@dataclass(frozen=True, eq=False)
class SingularComposite:
    reduced_segments: list
    jump: Optional[JumpRecord]
    composite_c: float
    u_inf: float
    tol_w: float = field(default=1e-6, repr=False)

    @property
    def composite_type(self):
        if self.jump is None:
            return WaveType.I
        if abs(self.jump.w_plus) <= self.tol_w:
            return WaveType.III
        if self.min_w() < -self.tol_w:
            return WaveType.IV
        return WaveType.II

    def min_w(self):
        return min(float(np.min(segment.w)) for segment in self.reduced_segments)

    def _lift(self, segments, z):
        u = np.concatenate([segment.u for segment in segments])
        w = np.concatenate([segment.w for segment in segments])
        nodes = np.concatenate([segment.z for segment in segments])
        order = np.argsort(nodes, kind="stable")
        u = np.interp(z, nodes[order], u[order])
        w = np.interp(z, nodes[order], w[order])
        v, y = critical_manifold_lift(u, w, self.composite_c)
        return np.array([u, y, v, w])

    def seed(self, epsilon, length_minus, length_plus, n_nodes):
        """
        Sample the lifted composite on [-length_minus, length_plus]; a jump is
        smoothed by a tanh layer of width O(epsilon).
        """
        grid = np.linspace(-length_minus, length_plus, n_nodes)
        if self.jump is None:
            return grid, self._lift(self.reduced_segments, grid)

        width = 2.0 * epsilon
        layer = self.jump.z + width * np.linspace(-10.0, 10.0, 201)
        grid = np.union1d(grid, layer[(layer > -length_minus) & (layer < length_plus)])
        before = self._lift(self.reduced_segments[:-1], grid)
        after = self._lift(self.reduced_segments[-1:], grid)
        blend = 0.5 * (1.0 + np.tanh((grid - self.jump.z) / width))
        return grid, (1.0 - blend) * before + blend * after


@dataclass
class _Trace:
    solution: object
    end: float
    status: str

    def point(self, s):
        u, w, z = self.solution(s)
        return u, w, z

    def segment(self, repelling=False, n=4001):
        s = np.linspace(0.0, self.end, n)
        u, w, z = self.solution(s)
        order = np.argsort(z, kind="stable")
        return ReducedSegment(z[order], u[order], w[order], repelling=repelling)


def _trace(u0, w0, z0, c, direction, z_stop, s_max=1e5):
    """
    Follow the desingularised flow from (u0, w0) for a parameter s, with
    zbar = direction * s, carrying z along through dz/dzbar = c**2 - 2u**2 w.
    """

    def rhs(_, x):
        u, w, _z = x
        du, dw = desingularised_rhs(u, w, c)
        return [direction * du, direction * dw, direction * (c**2 - 2 * u**2 * w)]

    def reached(_, x):
        return x[2] - z_stop

    def fold(_, x):
        return fold_value(x[0], x[1], c)

    def escaped(_, x):
        return 1e3 - abs(x[0])

    for event in (reached, fold, escaped):
        event.terminal = True

    solution = solve_ivp(
        rhs,
        (0.0, s_max),
        [u0, w0, z0],
        method="DOP853",
        rtol=1e-10,
        atol=1e-12,
        dense_output=True,
        events=(reached, fold, escaped),
    )
    status = "stalled"
    for name, hits in zip(("reached", "fold", "escaped"), solution.t_events):
        if len(hits):
            status = name
    return _Trace(solution.sol, float(solution.t[-1]), status)


def _attracting_orbit(u0, w0, z0, c, z_stop, direction=1):
    trace = _trace(u0, w0, z0, c, direction, z_stop)
    if trace.status == "fold":
        u, w, _ = trace.point(trace.end)
        raise FoldCollision(float(u), float(w))
    if trace.status != "reached":
        raise NoConvergence(
            f"reduced orbit from ({u0:.6g}, {w0:.6g}) did not reach z = {z_stop:.6g}"
        )
    return trace


def _shoot(samples, landing, target):
    """
    Root of landing(s) = target between the first pair of neighbouring
    samples that brackets it; None marks samples whose orbit failed.
    """
    values = [landing(s) for s in samples]
    for left, right, g_left, g_right in zip(samples, samples[1:], values, values[1:]):
        if g_left is None or g_right is None:
            continue
        if (g_left - target) * (g_right - target) <= 0:
            break
    else:
        return None

    def mismatch(s):
        value = landing(s)
        if value is None:
            raise NoConvergence(f"orbit failed inside the bracket at s = {s:.10g}")
        return value - target

    return brentq(mismatch, left, right, xtol=1e-12)


def _type_one_composite(c, target, settings):
    """Shoot on the family of S_a orbits labelled by their u at w = 1/2."""

    def landing_u(u_half):
        try:
            trace = _attracting_orbit(u_half, 0.5, 0.0, c, settings.length_plus)
        except (FoldCollision, NoConvergence):
            return None
        return float(trace.point(trace.end)[0])

    # the fold crosses w = 1/2 at u = c
    u_half = _shoot(c * np.linspace(0.02, 0.995, 40), landing_u, target)
    if u_half is None:
        return None
    forward = _attracting_orbit(u_half, 0.5, 0.0, c, settings.length_plus)
    backward = _attracting_orbit(
        u_half, 0.5, 0.0, c, -settings.length_minus, direction=-1
    )
    left, right = backward.segment(), forward.segment()
    segment = ReducedSegment(
        np.concatenate([left.z[:-1], right.z]),
        np.concatenate([left.u[:-1], right.u]),
        np.concatenate([left.w[:-1], right.w]),
    )
    u_inf = float(forward.point(forward.end)[0])
    logger.debug(
        "Type I composite at c=%s: u(w=1/2)=%.10g u_inf=%.10g", c, u_half, u_inf
    )
    return SingularComposite([segment], None, c, u_inf, tol_w=settings.tol_w)


def _canard_composite(c, target, settings):
    canard = equilibria(c)[2]
    u_h, w_h = canard.location
    stable = canard.eigenvectors[1]
    offset = 1e-6 * max(1.0, u_h)
    first = np.array([u_h, w_h]) + offset * stable
    second = np.array([u_h, w_h]) - offset * stable
    if fold_value(first[0], first[1], c) < 0:
        on_attracting, on_repelling = first, second
    else:
        on_attracting, on_repelling = second, first

    # both halves of the canard run backward in zbar
    inflow = _attracting_orbit(
        on_attracting[0], on_attracting[1], 0.0, c, -settings.length_minus, direction=-1
    )
    repelling = _trace(
        on_repelling[0], on_repelling[1], 0.0, c, -1, settings.length_plus
    )

    def landing(s):
        u, w_minus, z = repelling.point(s)
        _, w_plus = jump_target(u, 0.0, w_minus, c)
        try:
            trace = _attracting_orbit(u, w_plus, z, c, settings.length_plus)
        except (FoldCollision, NoConvergence):
            return None, None
        return float(trace.point(trace.end)[0]), trace

    samples = np.linspace(0.0, repelling.end, 61)[1:]
    s_jump = _shoot(samples, lambda s: landing(s)[0], target)
    if s_jump is None:
        raise NoConvergence(
            f"no jump point on the repelling sheet lands on u_inf = {target:.6g} "
            f"at c = {c:.6g}"
        )

    u_jump, w_minus, z_jump = (float(x) for x in repelling.point(s_jump))
    v_minus, y_jump = critical_manifold_lift(u_jump, w_minus, c)
    v_plus, w_plus = jump_target(u_jump, v_minus, w_minus, c)
    u_inf, outflow = landing(s_jump)

    on_sheet = repelling.segment(repelling=True)
    keep = on_sheet.z <= z_jump
    pre_jump = ReducedSegment(
        on_sheet.z[keep], on_sheet.u[keep], on_sheet.w[keep], repelling=True
    )
    jump = JumpRecord(z_jump, u_jump, y_jump, v_minus, w_minus, v_plus, w_plus)
    logger.debug(
        "Canard composite at c=%s: jump at z=%.6g u=%.6g w-=%.6g w+=%.6g",
        c,
        z_jump,
        u_jump,
        w_minus,
        w_plus,
    )
    return SingularComposite(
        [inflow.segment(), pre_jump, outflow.segment()],
        jump,
        c,
        u_inf,
        tol_w=settings.tol_w,
    )


def build_singular_composite(c, p, settings=None):
    """
    The eps = 0 wave at speed ``c`` reaching u_inf = p.u_inf: a single orbit
    on the attracting sheet when one exists, otherwise the canard orbit, a
    fast jump off the repelling sheet and the landing orbit.
    """
    if not c > 0:
        raise ValueError(f"wave speed c must be positive, got {c!r}")
    settings = settings or SolverSettings()
    target = p.u_inf
    composite = _type_one_composite(c, target, settings)
    if composite is None:
        composite = _canard_composite(c, target, settings)
    logger.info(
        "Singular composite at c=%s is type %s", c, composite.composite_type.value
    )
    return composite


def estimate_critical_speed(p, c_lo, c_hi, tol=1e-4, settings=None):
    """
    Bisect for the speed where singular composites stop being type I.
    """
    settings = settings or SolverSettings()

    def smooth(c):
        return _type_one_composite(c, p.u_inf, settings) is not None

    if not smooth(c_hi) or smooth(c_lo):
        raise NoConvergence(
            f"[{c_lo:.6g}, {c_hi:.6g}] does not bracket the type I/II transition"
        )
    while c_hi - c_lo > tol:
        middle = 0.5 * (c_lo + c_hi)
        if smooth(middle):
            c_hi = middle
        else:
            c_lo = middle
    return c_lo, c_hi


def _left_stable_projector(p):
    jacobian = slow_jacobian(np.array([0.0, p.c, 0.0, 1.0]), p)
    values, left = linalg.eig(jacobian, left=True, right=False)
    stable = np.argsort(values.real)[:2]
    return left[:, stable].conj().T.real


def _resampled_grid(wave, length_minus, length_plus, n_nodes):
    """
    A fresh mesh for continuing from ``wave``: half the nodes evenly spaced,
    half equidistributed in the total variation of w so that fronts and
    shock layers stay resolved.
    """
    half = max(n_nodes // 2, 2)
    even = np.linspace(-length_minus, length_plus, half)
    steps = np.abs(np.diff(wave.w))
    if not np.any(steps):
        return even
    # the small arc-length term keeps the cumulative strictly increasing
    steps = steps + 1e-9 * np.diff(wave.grid)
    variation = np.concatenate([[0.0], np.cumsum(steps)])
    levels = np.linspace(0.0, variation[-1], half)
    steep = np.interp(levels, variation, wave.grid)
    return np.union1d(even, np.clip(steep, -length_minus, length_plus))


def _pinned_at_canard(wave):
    """Whether ``wave`` is pinned by w(0) = w_H(c) rather than w(0) = 1/2."""
    w_zero = float(wave.state_at(0.0)[3])
    w_fold = canard_point(wave.params.c)[1]
    return abs(w_zero - w_fold) < abs(w_zero - 0.5)


def _fold_mesh(grid, length_minus, length_plus):
    t = np.concatenate(
        [[0.0, 1.0], -grid[grid <= 0] / length_minus, grid[grid >= 0] / length_plus]
    )
    t = np.unique(np.clip(t, 0.0, 1.0))
    return t[np.concatenate([[True], np.diff(t) > 1e-12])]


def refine_wave(guess, p, settings=None):
    """
    Solve the eps > 0 travelling-wave problem by collocation, starting from a
    singular composite or a neighbouring profile.
    """
    if p.epsilon == 0:
        raise SingularLimit()
    settings = settings or SolverSettings()
    length_minus, length_plus = settings.length_minus, settings.length_plus
    eps, c = p.epsilon, p.c

    if isinstance(guess, SingularComposite):
        grid, states = guess.seed(eps, length_minus, length_plus, settings.seed_nodes)
        at_canard = guess.jump is not None
        u_inf_guess = guess.u_inf
    else:
        if guess.params.c == c and guess.params.epsilon == eps:
            grid, states = guess.grid, guess.states
        else:
            grid = _resampled_grid(
                guess, length_minus, length_plus, settings.seed_nodes
            )
            states = guess.interpolant()(np.clip(grid, guess.grid[0], guess.grid[-1]))
        at_canard = _pinned_at_canard(guess)
        u_inf_guess = guess.params.u_inf

    phase = canard_point(c)[1] if at_canard else 0.5
    t = _fold_mesh(grid, length_minus, length_plus)

    def sample(z):
        return np.array([np.interp(z, grid, row) for row in states])

    y0 = np.vstack([sample(-length_minus * t), sample(length_plus * t)])
    u_anchor = float(sample(np.array([-length_minus]))[0, 0])
    projector = _left_stable_projector(p)
    target = settings.u_inf_target

    def fun(_, y, params):
        return np.vstack(
            [
                -length_minus * slow_rhs(y[:4], p),
                length_plus * slow_rhs(y[4:], p),
            ]
        )

    def fun_jac(_, y, params):
        jac = np.zeros((8, 8, y.shape[1]))
        jac[:4, :4] = -length_minus * slow_jacobian(y[:4], p)
        jac[4:, 4:] = length_plus * slow_jacobian(y[4:], p)
        return jac, np.zeros((8, 1, y.shape[1]))

    def bc(ya, yb, params):
        u_inf = params[0]
        left, right = yb[:4], yb[4:]
        v_s, y_s = critical_manifold_lift(left[0], left[3], c)
        off_manifold = left - np.array([left[0], y_s, v_s, left[3]])
        # left null vector of the Jacobian on the line of right equilibria
        centre = c * (right[0] - u_inf) + u_inf**2 * right[1] + eps * right[2]
        closing = u_inf - target if target is not None else left[0] - u_anchor
        return np.concatenate(
            [
                ya[:4] - ya[4:],
                [ya[7] - phase],
                projector @ off_manifold,
                [centre, closing],
            ]
        )

    logger.debug(
        "Collocation at eps=%s c=%s on %d nodes, phase w(0)=%.6g",
        eps,
        c,
        t.size,
        phase,
    )
    solution = solve_bvp(
        fun,
        bc,
        t,
        y0,
        p=[u_inf_guess],
        fun_jac=fun_jac,
        tol=settings.tol_newton,
        max_nodes=settings.max_nodes,
        bc_tol=settings.tol_bc,
    )
    residual = float(np.max(solution.rms_residuals))
    if not solution.success:
        raise NoConvergence(solution.message, best_residual=residual)

    x = solution.x
    grid = np.concatenate([-length_minus * x[:0:-1], length_plus * x])
    states = np.hstack([solution.y[:4, :0:-1], solution.y[4:]])
    wave = WaveProfile(
        grid, states, p.replace(u_inf=float(solution.p[0])), WaveType.I, residual
    )
    wave = replace(wave, wave_type=classify_wave(wave, settings.tol_w, settings.kappa))

    boundary = wave.boundary_residual()
    if boundary > settings.tol_bc:
        raise DomainTooShort(boundary, settings.tol_bc)
    if boundary > settings.tol_bc / 10:
        warnings.warn(
            f"boundary residual {boundary:.3e} is within a factor 10 of tol_bc",
            ProfileWarning,
        )
    logger.info(
        "Converged type %s wave at c=%s: u_inf=%.10g, residual %.3e, %d nodes",
        wave.wave_type.value,
        c,
        wave.params.u_inf,
        residual,
        grid.size,
    )
    return wave


def compute_wave(p, settings=None):
    """Composite at p.c followed by collocation refinement."""
    if p.epsilon == 0:
        raise SingularLimit()
    settings = settings or SolverSettings()
    target = settings.u_inf_target if settings.u_inf_target is not None else p.u_inf
    composite = build_singular_composite(p.c, p.replace(u_inf=target), settings)
    return refine_wave(composite, p, settings)


def continue_in_c(start, c_target, n_steps, settings=None):
    """
    Natural-parameter continuation from ``start`` to ``c_target``; the step
    is halved on failure at most ``settings.max_halvings`` times.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    settings = settings or SolverSettings()
    profiles = [start]
    c = start.params.c
    if c_target == c:
        return profiles

    nominal = (c_target - c) / n_steps
    step = nominal
    min_step = abs(nominal) / 2**settings.max_halvings
    current = start
    while (c_target - c) * np.sign(nominal) > 1e-14:
        trial = c + step
        if (c_target - trial) * np.sign(nominal) < 0:
            trial = c_target
        try:
            wave = refine_wave(current, current.params.replace(c=trial), settings)
        except (NoConvergence, DomainTooShort) as exc:
            step /= 2
            logger.info("Continuation step failed at c=%s (%s); halving", trial, exc)
            if abs(step) < min_step:
                raise ContinuationStuck(c, c_target) from exc
            continue
        profiles.append(wave)
        current, c = wave, trial
        if abs(step) < abs(nominal):
            step = min(abs(nominal), 2 * abs(step)) * np.sign(nominal)
    return profiles


def classify_wave(wave, tol_w=1e-6, kappa=0.1):
    """
    IV when w dips below -tol_w; II when a shock layer is present, i.e.
    max |w'| exceeds kappa / sqrt(eps); I otherwise. III only ever appears
    as a bracket between II and IV.
    """
    if np.min(wave.w) < -tol_w:
        return WaveType.IV
    if np.max(np.abs(wave.w_prime())) > kappa / np.sqrt(wave.params.epsilon):
        return WaveType.II
    return WaveType.I


def bracket_type_three(profiles):
    """
    The (c_II, c_IV) pair between the last type II and the first type IV
    profile of a continuation run, or None.
    """
    ordered = sorted(profiles, key=lambda wave: wave.params.c, reverse=True)
    for upper, lower in zip(ordered, ordered[1:]):
        if upper.wave_type is WaveType.II and lower.wave_type is WaveType.IV:
            return upper.params.c, lower.params.c
    return None


def profile_document(wave):
    payload = {
        "schema": PROFILE_SCHEMA,
        "version": PROFILE_VERSION,
        "epsilon": wave.params.epsilon,
        "c": wave.params.c,
        "u_inf": wave.params.u_inf,
        "wave_type": wave.wave_type.value,
        "residual": wave.bvp_residual,
        "n_nodes": int(wave.grid.size),
        "columns": list(PROFILE_COLUMNS),
        "rows": [[float(x) for x in row] for row in wave.rows()],
    }
    return json.dumps(payload) + "\n"


def save_profile(wave, path):
    path = Path(path)
    path.write_text(profile_document(wave), encoding="utf-8")
    return path


def load_profile(path):
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as exc:
        raise BadProfileFile(f"cannot read profile {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BadProfileFile(f"profile {path} is not valid JSON: {exc}") from exc

    if not isinstance(payload, dict) or payload.get("schema") != PROFILE_SCHEMA:
        raise BadProfileFile(f"{path} is not a riccati-evans profile")
    if payload.get("version") != PROFILE_VERSION:
        raise BadProfileFile(
            f"unsupported profile version {payload.get('version')!r} in {path}"
        )
    try:
        rows = np.array(payload["rows"], dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(PROFILE_COLUMNS):
            raise ValueError("rows must have five columns")
        if rows.shape[0] != payload["n_nodes"]:
            raise ValueError(
                f"n_nodes is {payload['n_nodes']} but {rows.shape[0]} rows follow"
            )
        params = ModelParams(payload["epsilon"], payload["c"], payload["u_inf"])
        return WaveProfile(
            rows[:, 0],
            rows[:, 1:].T,
            params,
            WaveType(payload["wave_type"]),
            float(payload["residual"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BadProfileFile(f"malformed profile {path}: {exc}") from exc


def export_profile_csv(wave, path, digest=""):
    return emit.write_csv(path, PROFILE_COLUMNS, wave.rows(), digest)
