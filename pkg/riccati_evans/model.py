"""
Right-hand sides and geometry of the haptotaxis travelling-wave problem.

States are ordered (u, y, v, w) throughout the package: u is the ECM density,
y the Lienard variable y = eps*w' - v*w + c*w, v = u' and w the tumour cell
density. Functions accept a single state or a (4, n) array of states.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from riccati_evans.exceptions import (
    DegenerateJump,
    FoldCollision,
    RiccatiEvansError,
    SingularLimit,
)

# |F| below this counts as lying on the fold
FOLD_DEADBAND = 1e-10


@dataclass(frozen=True)
class ModelParams:
    epsilon: float
    c: float
    u_inf: float = 1.0

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be non-negative, got {self.epsilon!r}")
        if not self.c > 0:
            raise ValueError(f"wave speed c must be positive, got {self.c!r}")
        if not self.u_inf > 0:
            raise ValueError(f"u_inf must be positive, got {self.u_inf!r}")

    @property
    def spectrally_admissible(self):
        """c**2 > 4*eps puts the absolute spectrum in the left half plane."""
        return self.c**2 > 4 * self.epsilon

    def replace(self, **changes):
        values = {"epsilon": self.epsilon, "c": self.c, "u_inf": self.u_inf}
        values.update(changes)
        return ModelParams(**values)


class Sheet(enum.Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    FOLD = "fold"


class EquilibriumKind(enum.Enum):
    CENTRE_UNSTABLE = "centre-unstable"
    CENTRE_STABLE = "centre-stable"
    FOLDED_SADDLE_CANARD = "folded-saddle-canard"


@dataclass(frozen=True)
class EquilibriumInfo:
    location: tuple
    eigenvalues: tuple
    eigenvectors: tuple
    kind: EquilibriumKind


def normalise_vector(vector, rtol=1e-12):
    """
    Scale ``vector`` to unit Euclidean norm with its first non-negligible
    component real and positive.
    """
    vector = np.asarray(vector)
    norm = np.linalg.norm(vector)
    if norm == 0:
        raise ValueError("cannot normalise the zero vector")
    vector = vector / norm
    magnitudes = np.abs(vector)
    lead = vector[np.argmax(magnitudes > rtol * magnitudes.max())]
    phase = lead / abs(lead)
    vector = vector / phase
    if not np.iscomplexobj(vector) or np.all(vector.imag == 0):
        return vector.real if np.iscomplexobj(vector) else vector
    return vector


def _split(state):
    state = np.asarray(state, dtype=float)
    return state[0], state[1], state[2], state[3]


def slow_rhs(state, p):
    """
    The nonlinear slow system in the slow travelling-wave coordinate z.
    """
    if p.epsilon == 0:
        raise SingularLimit()
    u, y, v, w = _split(state)
    eps, c = p.epsilon, p.c
    return np.array(
        [
            v,
            -w * (1 - w),
            (-c * v + u**2 * w) / eps,
            (y + v * w - c * w) / eps,
        ]
    )


def fast_rhs(state, p):
    """
    The nonlinear fast system in zeta = z / eps; valid at eps = 0.
    """
    u, y, v, w = _split(state)
    eps, c = p.epsilon, p.c
    return np.array(
        [
            eps * v,
            -eps * w * (1 - w),
            -c * v + u**2 * w,
            y + v * w - c * w,
        ]
    )


def layer_rhs(state, c):
    u, y, v, w = _split(state)
    zero = np.zeros_like(u)
    return np.array([zero, zero, -c * v + u**2 * w, y + v * w - c * w])


def slow_jacobian(state, p):
    """
    Jacobian of the slow system with respect to (u, y, v, w).

    Along a wave this is the linearised coefficient matrix at lambda = 0. For
    a (4, n) array of states the result has shape (4, 4, n).
    """
    if p.epsilon == 0:
        raise SingularLimit()
    u, y, v, w = _split(state)
    eps, c = p.epsilon, p.c
    jacobian = np.zeros((4, 4) + np.shape(u))
    jacobian[0, 2] = 1.0
    jacobian[1, 3] = -1.0 + 2.0 * w
    jacobian[2, 0] = 2.0 * u * w / eps
    jacobian[2, 2] = -c / eps
    jacobian[2, 3] = u**2 / eps
    jacobian[3, 1] = 1.0 / eps
    jacobian[3, 2] = w / eps
    jacobian[3, 3] = (v - c) / eps
    return jacobian


def critical_manifold_lift(u, w, c):
    """
    Lift a point (u, w) onto the critical manifold S, returning (v, y).
    """
    if not c > 0:
        raise ValueError(f"wave speed c must be positive, got {c!r}")
    v = u**2 * w / c
    y = -(u**2) * w**2 / c + c * w
    return v, y


def fold_value(u, w, c):
    """F < 0 on the attracting sheet, F > 0 on the repelling sheet."""
    return 2 * u**2 * w - c**2


def sheet(u, w, c):
    value = fold_value(u, w, c)
    if abs(value) < FOLD_DEADBAND:
        return Sheet.FOLD
    return Sheet.ATTRACTING if value < 0 else Sheet.REPELLING


def reduced_matrix(u, w, c):
    """Left-hand matrix of the reduced problem written over (u, w)."""
    return np.array(
        [
            [c, 0.0],
            [-2 * u * w**2 / c, c - 2 * u**2 * w / c],
        ]
    )


def reduced_rhs(u, w, c):
    """
    The reduced vector field (u', w') in z, defined away from the fold.
    """
    if sheet(u, w, c) is Sheet.FOLD:
        raise FoldCollision(u, w)
    matrix = reduced_matrix(u, w, c)
    rhs = np.array([u**2 * w, -w * (1 - w)])
    return np.linalg.solve(matrix, rhs)


def desingularised_rhs(u, w, c):
    """
    The desingularised reduced flow in the rescaled variable zbar, where
    dz/dzbar = c**2 - 2*u**2*w.

    Orbits keep their z-orientation on S_a and reverse it on S_r.
    """
    if not c > 0:
        raise ValueError(f"wave speed c must be positive, got {c!r}")
    du = c * u**2 * w - 2 * u**4 * w**2 / c
    dw = -c * w * (1 - w) + 2 * u**3 * w**3 / c
    return du, dw


def desingularised_jacobian(u, w, c):
    return np.array(
        [
            [
                2 * c * u * w - 8 * u**3 * w**2 / c,
                c * u**2 - 4 * u**4 * w / c,
            ],
            [
                6 * u**2 * w**3 / c,
                -c * (1 - 2 * w) + 6 * u**3 * w**2 / c,
            ],
        ]
    )


def canard_point(c):
    """The folded saddle canard point (u_H, w_H)."""
    u_h = c / 4 * (c + math.sqrt(c**2 + 8))
    return u_h, 1 / (u_h + 1)


def canard_eigenvector_slopes(c):
    """
    Closed-form first components f+(c), f-(c) of the canard-point
    eigenvectors (f, -1).
    """
    gamma = math.sqrt(c**2 + 8)
    radicand = 16 + 24 * c * gamma - 48 * c**2 + 6 * c**3 * gamma - 6 * c**4
    root = math.sqrt(radicand)
    numerator = c**2 * (c + gamma) ** 4
    base = 64 * (c**2 + c * gamma + 1)
    spread = 2 * (c + gamma) ** 2 * root
    return numerator / (base + spread), numerator / (base - spread)


def _canard_equilibrium(c):
    u_h, w_h = canard_point(c)
    jacobian = desingularised_jacobian(u_h, w_h, c)
    trace = np.trace(jacobian)
    det = np.linalg.det(jacobian)
    disc = math.sqrt(trace**2 - 4 * det)
    lam_plus, lam_minus = (trace + disc) / 2, (trace - disc) / 2

    f_plus, f_minus = canard_eigenvector_slopes(c)
    psi_plus = np.array([f_plus, -1.0])
    psi_minus = np.array([f_minus, -1.0])
    scale = max(1.0, np.abs(jacobian).max())

    def residual(lam, psi):
        psi = psi / np.linalg.norm(psi)
        return np.linalg.norm(jacobian @ psi - lam * psi) / scale

    straight = max(residual(lam_plus, psi_plus), residual(lam_minus, psi_minus))
    crossed = max(residual(lam_plus, psi_minus), residual(lam_minus, psi_plus))
    if crossed < straight:
        psi_plus, psi_minus = psi_minus, psi_plus
    worst = min(straight, crossed)
    if not worst <= 1e-8:
        raise RiccatiEvansError(
            f"closed-form canard eigenvectors disagree with the Jacobian at "
            f"c = {c!r} (residual {worst:.3e})"
        )
    return EquilibriumInfo(
        location=(u_h, w_h),
        eigenvalues=(lam_plus, lam_minus),
        eigenvectors=(normalise_vector(psi_plus), normalise_vector(psi_minus)),
        kind=EquilibriumKind.FOLDED_SADDLE_CANARD,
    )


def equilibria(c, u_inf=1.0):
    """
    Equilibria of the desingularised flow with their eigen-data: the left
    background state, the right background state (u_inf, 0) and the canard
    point, in that order. The canard entry lists (lambda+, lambda-).
    """
    if not c > 0:
        raise ValueError(f"wave speed c must be positive, got {c!r}")
    left = EquilibriumInfo(
        location=(0.0, 1.0),
        eigenvalues=(c, 0.0),
        eigenvectors=(np.array([0.0, 1.0]), np.array([1.0, 0.0])),
        kind=EquilibriumKind.CENTRE_UNSTABLE,
    )
    right = EquilibriumInfo(
        location=(u_inf, 0.0),
        eigenvalues=(-c, 0.0),
        eigenvectors=(
            normalise_vector(np.array([-(u_inf**2), 1.0])),
            np.array([1.0, 0.0]),
        ),
        kind=EquilibriumKind.CENTRE_STABLE,
    )
    return [left, right, _canard_equilibrium(c)]


def jump_target(u, v_minus, w_minus, c):
    """
    End point (v+, w+) of the fast fibre leaving (u, v-, w-) on S_r.

    The fibre keeps u and y fixed and lands at the mirror image of w- in the
    fold: w+ + w- = c**2 / u**2.
    """
    if u == 0:
        raise DegenerateJump("fast fibres are undefined at u = 0")
    w_plus = c**2 / u**2 - w_minus
    v_plus = v_minus + u**2 / c * (w_plus - w_minus)
    return v_plus, w_plus
