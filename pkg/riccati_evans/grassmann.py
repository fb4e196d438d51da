"""
Two-planes in C^4 and the Riccati flow they induce.

A plane is carried either as a 4x2 frame, as its six Plucker coordinates, or
as a 2x2 matrix W in a chart: with T*frame = [X; Y], W = Y X^-1. The linear
system p' = A(z) p moves planes, and in a chart this becomes the matrix
Riccati equation W' = C + D W - W A - W B W for the blocks of T A T^-1.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from django.core.exceptions import ImproperlyConfigured
from scipy import linalg
from scipy.integrate import solve_ivp

from riccati_evans.exceptions import (
    ChartSingularity,
    DegenerateFrame,
    NoConvergence,
    NotInChart,
)
from riccati_evans.linearization import (
    coefficient_field,
    frozen_invariant_frame,
    stable_frame_plus,
    unstable_frame_minus,
)

logger = logging.getLogger(__name__)

PLUCKER_INDICES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
RANK_TOL = 1e-12
CHART_CONDITION_LIMIT = 1e10
BLOWUP_NORM = 1e8
RELAXATION_LENGTH = 10.0
# spatial rates above this switch the automatic integrator to Radau
STIFF_RATE = 500.0
# largest log-growth allowed between two orthonormalisations of a frame
CHUNK_GROWTH = 20.0


@dataclass(frozen=True, eq=False)
class Chart:
    T: np.ndarray
    label: str

    @cached_property
    def inverse(self):
        return linalg.inv(self.T)

    @cached_property
    def determinant(self):
        return complex(linalg.det(self.T))

    @property
    def is_real(self):
        return not np.any(np.imag(self.T))

    def conjugate(self, matrix):
        return self.T @ matrix @ self.inverse

    def blocks(self, matrix):
        """The 2x2 blocks (A, B, C, D) of T M T^-1."""
        conjugated = self.conjugate(matrix)
        return (
            conjugated[:2, :2],
            conjugated[:2, 2:],
            conjugated[2:, :2],
            conjugated[2:, 2:],
        )


@dataclass(frozen=True, eq=False)
class PluckerPoint:
    coordinates: np.ndarray

    def relation_residual(self):
        """|K12 K34 - K13 K24 + K14 K23| relative to max |K|^2."""
        k12, k13, k14, k23, k24, k34 = self.coordinates
        scale = np.max(np.abs(self.coordinates)) ** 2
        return float(abs(k12 * k34 - k13 * k24 + k14 * k23) / scale)

    def proportional_to(self, other, rtol=1e-10):
        first = self.coordinates / np.max(np.abs(self.coordinates))
        second = other.coordinates / np.max(np.abs(other.coordinates))
        cross = np.outer(first, second) - np.outer(second, first)
        return bool(np.max(np.abs(cross)) <= rtol)


@dataclass(frozen=True, eq=False)
class RiccatiState:
    W: np.ndarray
    chart: Chart

    def norm(self):
        return float(np.max(np.abs(self.W)))


def default_chart():
    """The chart used for all stability computations; det T = 1."""
    T = np.array(
        [
            [-1j, 0, 1, 0],
            [0, 1j, 0, 1],
            [0, 0, 1j, 0],
            [0, 0, 0, -1j],
        ],
        dtype=complex,
    )
    return Chart(T, "paper")


def identity_chart():
    return Chart(np.eye(4, dtype=complex), "identity")


def swap_chart():
    T = np.zeros((4, 4), dtype=complex)
    T[:2, 2:] = np.eye(2)
    T[2:, :2] = np.eye(2)
    return Chart(T, "swap")


CHARTS = {
    "paper": default_chart,
    "identity": identity_chart,
    "swap": swap_chart,
}


def chart_by_label(label):
    try:
        return CHARTS[label]()
    except KeyError:
        raise ImproperlyConfigured(
            f"Unknown chart {label!r}; choose one of {', '.join(sorted(CHARTS))}"
        )


def check_frame(frame):
    frame = np.asarray(frame, dtype=complex)
    if frame.shape != (4, 2):
        raise DegenerateFrame(f"a frame is a 4x2 matrix, got shape {frame.shape}")
    singular = linalg.svdvals(frame)
    if not singular[-1] > RANK_TOL * singular[0]:
        raise DegenerateFrame(
            f"frame is rank deficient (singular values {singular[0]:.3e}, "
            f"{singular[-1]:.3e})"
        )
    return frame


def plucker_embed(frame):
    frame = check_frame(frame)
    first, second = frame[:, 0], frame[:, 1]
    return PluckerPoint(
        np.array(
            [first[i] * second[j] - first[j] * second[i] for i, j in PLUCKER_INDICES]
        )
    )


def plucker_chart(point):
    """Index pair of the largest Plucker coordinate of ``point``."""
    return PLUCKER_INDICES[int(np.argmax(np.abs(point.coordinates)))]


def frame_to_chart(frame, chart):
    frame = check_frame(frame)
    image = chart.T @ frame
    top, bottom = image[:2], image[2:]
    condition = np.linalg.cond(top)
    if not condition < CHART_CONDITION_LIMIT:
        raise NotInChart(chart.label, condition)
    return RiccatiState(linalg.solve(top.T, bottom.T).T, chart)


def frame_from_chart(state):
    return state.chart.inverse @ np.vstack([np.eye(2), state.W])


def riccati_rhs(W, blocks):
    A, B, C, D = blocks
    return C + D @ W - W @ A - W @ B @ W


def riccati_jacobian(W, blocks):
    """Jacobian of riccati_rhs with respect to W flattened column-major."""
    A, B, _, D = blocks
    eye = np.eye(2)
    return (
        np.kron(eye, D)
        - np.kron(A.T, eye)
        - np.kron((B @ W).T, eye)
        - np.kron(eye, W @ B)
    )


def _choose_method(method, *matrices):
    if method != "auto":
        return method
    rate = max(np.max(np.abs(np.linalg.eigvals(matrix))) for matrix in matrices)
    return "Radau" if rate > STIFF_RATE else "DOP853"


def _riccati_flow(W0, span, blocks_at, chart, method, rtol, atol, blowup):
    z_start, z_end = span
    if z_start == z_end:
        return np.array(W0, dtype=complex)

    def rhs(z, y):
        W = y.reshape(2, 2, order="F")
        return riccati_rhs(W, blocks_at(z)).ravel(order="F")

    def jac(z, y):
        return riccati_jacobian(y.reshape(2, 2, order="F"), blocks_at(z))

    def left_chart(_, y):
        return blowup - np.max(np.abs(y))

    left_chart.terminal = True
    options = {"jac": jac} if method in ("Radau", "BDF") else {}
    solution = solve_ivp(
        rhs,
        span,
        np.asarray(W0, dtype=complex).ravel(order="F"),
        method=method,
        rtol=rtol,
        atol=atol,
        events=left_chart,
        **options,
    )
    if solution.status == 1:
        z_hit = float(solution.t_events[0][0])
        norm = float(np.max(np.abs(solution.y_events[0][0])))
        raise ChartSingularity(z_hit, norm, chart.label)
    if solution.status != 0:
        raise NoConvergence(f"Riccati integration failed: {solution.message}")
    return solution.y[:, -1].reshape(2, 2, order="F")


def integrate_riccati(
    state,
    span,
    lam,
    wave,
    rtol=1e-10,
    atol=1e-12,
    blowup=BLOWUP_NORM,
    method="auto",
):
    """
    Carry ``state`` along the chart Riccati flow of A(z; lam) over ``span``;
    raises ChartSingularity when |W| exceeds ``blowup``.
    """
    field = coefficient_field(wave, lam)
    chart = state.chart
    method = _choose_method(method, field(span[0]), field(span[1]))
    W = _riccati_flow(
        state.W,
        span,
        lambda z: chart.blocks(field(z)),
        chart,
        method,
        rtol,
        atol,
        blowup,
    )
    return RiccatiState(W, chart)


def relax_frozen(state, matrix, length, rtol=1e-10, atol=1e-12, blowup=BLOWUP_NORM):
    """
    Flow ``state`` for ``length`` under the constant coefficient ``matrix``;
    a negative length flows backward.
    """
    chart = state.chart
    blocks = chart.blocks(matrix)
    method = _choose_method("auto", matrix)
    W = _riccati_flow(
        state.W, (0.0, length), lambda _: blocks, chart, method, rtol, atol, blowup
    )
    return RiccatiState(W, chart)


class RiccatiEvans:
    """
    The Riccati-Evans function lam -> det(W^s(z0) - W^u(z0)) of one wave in
    one chart.

    W^u starts from the unstable invariant plane of the coefficient frozen at
    the left end of the wave, W^s from the stable plane of the coefficient
    frozen at the right end. Each is relaxed under that frozen coefficient
    and then carried to z0.
    """

    def __init__(
        self,
        wave,
        chart=None,
        z0=0.0,
        rtol=1e-10,
        atol=1e-12,
        blowup=BLOWUP_NORM,
        relaxation=RELAXATION_LENGTH,
        method="auto",
    ):
        self.wave = wave
        self.chart = chart or default_chart()
        self.z0 = z0
        self.rtol = rtol
        self.atol = atol
        self.blowup = blowup
        self.relaxation = relaxation
        self.method = method

    @property
    def label(self):
        return self.chart.label

    def _carry(self, state, span, lam):
        return integrate_riccati(
            state,
            span,
            lam,
            self.wave,
            rtol=self.rtol,
            atol=self.atol,
            blowup=self.blowup,
            method=self.method,
        )

    def unstable_state(self, lam):
        field = coefficient_field(self.wave, lam)
        left = self.wave.grid[0]
        frame = frozen_invariant_frame(field(left), unstable=True)
        state = frame_to_chart(frame, self.chart)
        state = relax_frozen(
            state, field(left), self.relaxation, self.rtol, self.atol, self.blowup
        )
        return self._carry(state, (left, self.z0), lam)

    def stable_state(self, lam):
        field = coefficient_field(self.wave, lam)
        right = self.wave.grid[-1]
        frame = frozen_invariant_frame(field(right), unstable=False)
        state = frame_to_chart(frame, self.chart)
        state = relax_frozen(
            state, field(right), -self.relaxation, self.rtol, self.atol, self.blowup
        )
        return self._carry(state, (right, self.z0), lam)

    def __call__(self, lam):
        unstable = self.unstable_state(lam)
        stable = self.stable_state(lam)
        return complex(linalg.det(stable.W - unstable.W))

    def chart_factor(self, lam):
        """
        det X^u * det X^s of the Jost frames at z0 in this chart, up to a
        positive factor. E_T times this vanishes exactly where the Evans
        function does, so its winding is the chart correction.
        """
        frames = oracle_frames(
            lam,
            self.wave,
            self.z0,
            relaxation=self.relaxation,
            rtol=self.rtol,
            atol=self.atol,
        )
        _, det_xu, det_xs = chart_factors(frames, self.chart)
        return det_xu * det_xs


def riccati_evans(lam, wave, chart=None, z0=0.0, **options):
    return RiccatiEvans(wave, chart, z0, **options)(lam)


def linear_flow(frame, span, lam, wave, rtol=1e-10, atol=1e-12, method="auto"):
    """
    Push a 4xk frame through p' = A(z; lam) p without renormalisation.
    """
    frame = np.asarray(frame, dtype=complex)
    z_start, z_end = span
    if z_start == z_end:
        return frame
    field = coefficient_field(wave, lam)
    method = _choose_method(method, field(z_start), field(z_end))
    columns = frame.shape[1]
    eye = np.eye(columns)

    def rhs(z, y):
        return (field(z) @ y.reshape(4, columns, order="F")).ravel(order="F")

    def jac(z, _):
        return np.kron(eye, field(z))

    options = {"jac": jac} if method in ("Radau", "BDF") else {}
    solution = solve_ivp(
        rhs,
        span,
        frame.ravel(order="F"),
        method=method,
        rtol=rtol,
        atol=atol,
        **options,
    )
    if solution.status != 0:
        raise NoConvergence(f"linear flow integration failed: {solution.message}")
    return solution.y[:, -1].reshape(4, columns, order="F")


def orthonormalise(frame):
    """
    Gram-Schmidt factor Q of ``frame`` = Q R with R positive on the diagonal,
    and log det R.
    """
    q, r = linalg.qr(frame, mode="economic")
    diagonal = np.diag(r)
    phases = diagonal / np.abs(diagonal)
    q = q * phases
    return q, float(np.sum(np.log(np.abs(diagonal))))


@dataclass(frozen=True)
class OracleFrames:
    unstable: np.ndarray
    stable: np.ndarray
    log_scale: float

    @property
    def value(self):
        return complex(linalg.det(np.hstack([self.unstable, self.stable])))


def _spectral_rate(matrices):
    return max(np.max(np.abs(np.linalg.eigvals(matrix))) for matrix in matrices)


def _renormalised_flow(frame, span, lam, wave, chunk, ratio, rtol, atol):
    z_start, z_end = span
    log_scale = 0.0
    if z_start == z_end:
        frame, log_scale = orthonormalise(frame)
        return frame, log_scale
    field = coefficient_field(wave, lam)
    samples = np.linspace(z_start, z_end, 65)
    chunk = min(chunk, CHUNK_GROWTH / _spectral_rate(field(z) for z in samples))
    steps = max(1, int(np.ceil(abs(z_end - z_start) / chunk)))
    nodes = np.linspace(z_start, z_end, steps + 1)
    for a, b in zip(nodes, nodes[1:]):
        frame = linear_flow(frame, (a, b), lam, wave, rtol, atol)
        singular = linalg.svdvals(frame)
        if singular[0] / singular[-1] > ratio or singular[0] > ratio:
            frame, scale = orthonormalise(frame)
            log_scale += scale
    frame, scale = orthonormalise(frame)
    return frame, log_scale + scale


def _frozen_relaxation(frame, matrix, length, chunk=0.5):
    log_scale = 0.0
    chunk = min(chunk, CHUNK_GROWTH / _spectral_rate([matrix]))
    steps = max(1, int(np.ceil(abs(length) / chunk)))
    propagator = linalg.expm((length / steps) * matrix)
    for _ in range(steps):
        frame, scale = orthonormalise(propagator @ frame)
        log_scale += scale
    return frame, log_scale


def oracle_frames(
    lam,
    wave,
    z0=0.0,
    relaxation=RELAXATION_LENGTH,
    chunk=1.0,
    ratio=1e6,
    rtol=1e-10,
    atol=1e-12,
):
    """
    Jost frames at z0 from the linear flow, orthonormalised whenever their
    conditioning exceeds ``ratio``; the log of the discarded scale factors is
    returned alongside.

    The flow is cut into chunks short enough that a frame grows by at most
    exp(CHUNK_GROWTH) between orthonormalisations. Every discarded factor is
    triangular with a positive diagonal, so the frames differ from the
    analytic Jost frames by a positive determinant and the argument of
    ``value`` is that of the Evans function.
    """
    field = coefficient_field(wave, lam)
    left, right = wave.grid[0], wave.grid[-1]
    try:
        unstable, scale_u = _frozen_relaxation(
            unstable_frame_minus(lam, wave.params), field(left), relaxation
        )
        unstable, flow_u = _renormalised_flow(
            unstable, (left, z0), lam, wave, chunk, ratio, rtol, atol
        )
        stable, scale_s = _frozen_relaxation(
            stable_frame_plus(lam, wave.params), field(right), -relaxation
        )
        stable, flow_s = _renormalised_flow(
            stable, (right, z0), lam, wave, chunk, ratio, rtol, atol
        )
    except (ValueError, linalg.LinAlgError) as exc:
        raise NoConvergence(
            f"oracle frames at lambda = {complex(lam)!r} failed: {exc}"
        ) from exc
    frames = OracleFrames(unstable, stable, scale_u + flow_u + scale_s + flow_s)
    if not np.isfinite(frames.value):
        raise NoConvergence(f"oracle value at lambda = {complex(lam)!r} is not finite")
    return frames


def direct_evans_oracle(lam, wave, z0=0.0, **options):
    """
    det[Q^u Q^s] of the orthonormalised Jost frames at z0: the Evans function
    up to a positive factor, so its zeros are exactly those of the Evans
    function.
    """
    return oracle_frames(lam, wave, z0, **options).value


def chart_factors(frames, chart):
    """
    (E_T, det X^u, det X^s) of a pair of frames in ``chart``, so that
    det[F^u F^s] = det(T^-1) det X^u det X^s E_T.
    """
    unstable = frame_to_chart(frames.unstable, chart)
    stable = frame_to_chart(frames.stable, chart)
    det_xu = complex(linalg.det((chart.T @ frames.unstable)[:2]))
    det_xs = complex(linalg.det((chart.T @ frames.stable)[:2]))
    return complex(linalg.det(stable.W - unstable.W)), det_xu, det_xs
