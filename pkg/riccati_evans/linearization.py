"""
The linearised spectral problem along a travelling wave.

Coefficient matrices act on perturbations ordered (p, s, q, r), the
linearisations of (u, y, v, w). Spatial eigenvalues at the two ends are taken
from closed forms with the principal square root, so each branch is followed
analytically into the essential spectrum instead of being re-sorted by the
sign of its real part.
"""

import enum
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from riccati_evans.exceptions import (
    BranchPoint,
    NearDegenerate,
    NoStabilisingWeight,
    OutOfDomain,
    RiccatiEvansError,
)
from riccati_evans.model import normalise_vector

logger = logging.getLogger(__name__)

BRANCH_POINT_TOL = 1e-12
DEGENERATE_TOL = 1e-10


class Side(enum.Enum):
    MINUS = "minus"
    PLUS_SLOW = "plus_slow"
    PLUS_FAST = "plus_fast"


class Region(enum.Enum):
    OMEGA1 = "Omega1"
    ESSENTIAL_SPECTRUM = "EssentialSpectrum"
    OMEGA2 = "Omega2"


@dataclass(frozen=True)
class AsymptoticEigenData:
    side: Side
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    branch_tags: tuple

    def pair(self, tag):
        """Return (eigenvalue, eigenvector) for a branch tag such as "0+"."""
        index = self.branch_tags.index(tag)
        return self.eigenvalues[index], self.eigenvectors[:, index]


@dataclass(frozen=True)
class DispersionCurve:
    label: str
    k: np.ndarray
    lam: np.ndarray


def _linear_matrix(lam, u, v, w, epsilon, c):
    return np.array(
        [
            [0, 0, 1, 0],
            [0, 0, 0, lam - 1 + 2 * w],
            [(lam + 2 * u * w) / epsilon, 0, -c / epsilon, u**2 / epsilon],
            [0, 1 / epsilon, w / epsilon, (v - c) / epsilon],
        ],
        dtype=complex,
    )


def coefficient_field(wave, lam):
    """
    Return z -> A(z; lam, eps) for ``wave``, evaluating the profile through
    its C1 interpolant.
    """
    p = wave.params
    lo, hi = wave.grid[0], wave.grid[-1]
    interpolant = wave.interpolant()

    def field(z):
        if not lo <= z <= hi:
            raise OutOfDomain(z, lo, hi)
        u, _, v, w = interpolant(z)
        return _linear_matrix(lam, u, v, w, p.epsilon, p.c)

    return field


def slow_coeff_matrix(z, lam, wave):
    """
    A(z; lam, eps) along ``wave``; rows 3 and 4 carry the 1/eps scaling.
    """
    return coefficient_field(wave, lam)(z)


def fast_coeff_matrix(zeta, lam, u, v, w, p):
    """
    B(zeta; lam, eps) at the profile point (u, v, w).

    The matrix only depends on zeta through the profile values, which the
    caller supplies; B equals eps * A at the same point.
    """
    eps = p.epsilon
    return np.array(
        [
            [0, 0, eps, 0],
            [0, 0, 0, eps * (lam - 1 + 2 * w)],
            [lam + 2 * u * w, 0, -p.c, u**2],
            [0, 1, w, v - p.c],
        ],
        dtype=complex,
    )


def asymptotic_matrices(lam, p, v_plus=0.0, w_plus=0.0):
    """
    The limits A_-, A_+ of the slow matrix and the fast limit B_+ at the
    landing state (u_inf, v_plus, w_plus) of a shock.
    """
    if p.epsilon == 0:
        raise RiccatiEvansError("A_- and A_+ need epsilon > 0")
    a_minus = _linear_matrix(lam, 0.0, 0.0, 1.0, p.epsilon, p.c)
    a_plus = _linear_matrix(lam, p.u_inf, 0.0, 0.0, p.epsilon, p.c)
    b_plus = fast_coeff_matrix(0.0, lam, p.u_inf, v_plus, w_plus, p)
    return a_minus, a_plus, b_plus


def branch_points(p):
    """Branch points of the square roots attached to subscripts -1, 0, 1."""
    base = -(p.c**2) / (4 * p.epsilon)
    return {"-1": base - 1.0, "0": base, "1": base + 1.0}


def _root_pair(lam, shift, p):
    radical = np.sqrt(complex(p.c**2 + 4 * p.epsilon * (lam + shift)))
    return (-p.c + radical) / (2 * p.epsilon), (-p.c - radical) / (2 * p.epsilon)


_SIDE_BRANCHES = {
    Side.MINUS: (("0", 0.0), ("-1", 1.0)),
    Side.PLUS_SLOW: (("0", 0.0), ("1", -1.0)),
    Side.PLUS_FAST: (("0", 0.0), ("1", -1.0)),
}


def _check_branch_points(lam, p, subscripts):
    points = branch_points(p)
    for subscript in subscripts:
        point = points[subscript]
        if abs(lam - point) < BRANCH_POINT_TOL * max(1.0, abs(point)):
            raise BranchPoint(lam, point)


def closed_form_eigenvalues(lam, p, side, v_plus=0.0, w_plus=0.0):
    """
    Closed-form spatial eigenvalues for ``side`` as a dict keyed by branch
    tag ("0+", "0-", "-1+", ...). The fast side returns beta = eps * mu and
    only has a closed form when the landing state has v_plus = w_plus = 0.
    """
    if side is Side.PLUS_FAST and (v_plus != 0 or w_plus != 0):
        raise RiccatiEvansError(
            "closed-form eigenvalues of B_+ need a landing state with "
            f"v_plus = w_plus = 0, got ({v_plus!r}, {w_plus!r})"
        )
    values = {}
    for subscript, shift in _SIDE_BRANCHES[side]:
        plus, minus = _root_pair(lam, shift, p)
        if side is Side.PLUS_FAST:
            plus, minus = p.epsilon * plus, p.epsilon * minus
        values[subscript + "+"] = plus
        values[subscript + "-"] = minus
    return values


def _null_vector(matrix, eigenvalue):
    shifted = matrix - eigenvalue * np.eye(matrix.shape[0])
    _, _, vh = linalg.svd(shifted)
    return normalise_vector(vh[-1].conj())


def asymptotic_eigendata(lam, p, side, v_plus=0.0, w_plus=0.0):
    """
    Eigen-data of A_- (MINUS), A_+ (PLUS_SLOW) or B_+ (PLUS_FAST) with the
    closed-form eigenvalues and numerically computed eigenvectors.
    """
    lam = complex(lam)
    subscripts = [subscript for subscript, _ in _SIDE_BRANCHES[side]]
    _check_branch_points(lam, p, subscripts)
    a_minus, a_plus, b_plus = asymptotic_matrices(lam, p, v_plus, w_plus)
    matrix = {Side.MINUS: a_minus, Side.PLUS_SLOW: a_plus, Side.PLUS_FAST: b_plus}[
        side
    ]
    values = closed_form_eigenvalues(lam, p, side, v_plus, w_plus)
    tags = tuple(values)
    eigenvalues = np.array([values[tag] for tag in tags])
    for i, left in enumerate(eigenvalues):
        for right in eigenvalues[i + 1 :]:
            if abs(left - right) < DEGENERATE_TOL * max(1.0, abs(left)):
                raise NearDegenerate(
                    f"spatial eigenvalues {left!r} and {right!r} of the {side.value} "
                    f"matrix coincide at lambda = {lam!r}"
                )
    vectors = np.column_stack([_null_vector(matrix, mu) for mu in eigenvalues])
    return AsymptoticEigenData(side, eigenvalues, vectors, tags)


def asymptotic_eigenvalues(lam, p, v_plus=0.0, w_plus=0.0):
    return {
        side: asymptotic_eigendata(lam, p, side, v_plus, w_plus) for side in Side
    }


def _unit_columns(frame):
    return frame / np.linalg.norm(frame, axis=0)


def unstable_frame_minus(lam, p):
    """
    Frame of the branches mu_0^+ and mu_-1^+ of A_-, continued analytically
    into the essential spectrum.

    The eigenvectors are polynomial in lam and the branch eigenvalue, so the
    frame has no sign or phase jumps as lam moves; only positive column
    scalings are applied.
    """
    lam = complex(lam)
    _check_branch_points(lam, p, ("0", "-1"))
    values = closed_form_eigenvalues(lam, p, Side.MINUS)
    mu_0, mu_1 = values["0+"], values["-1+"]
    frame = np.array(
        [
            [1, 0],
            [-(lam + 1) * mu_0, p.epsilon * mu_1 + p.c],
            [mu_0, 0],
            [-(mu_0**2), 1],
        ],
        dtype=complex,
    )
    return _unit_columns(frame)


def stable_frame_plus(lam, p, side="slow"):
    """
    Frame of the branches rho_0^-, rho_1^- of A_+ (``side="slow"``) or
    beta_0^-, beta_1^- of B_+ (``side="fast"``). B_+ is eps * A_+ at the
    same end state, so both sides share eigenvectors.
    """
    side = {"slow": Side.PLUS_SLOW, "fast": Side.PLUS_FAST}[side]
    lam = complex(lam)
    _check_branch_points(lam, p, ("0", "1"))
    values = closed_form_eigenvalues(lam, p, Side.PLUS_SLOW)
    rho_0, rho_1 = values["0-"], values["1-"]
    u_inf = p.u_inf
    frame = np.array(
        [
            [1, -(u_inf**2)],
            [0, p.epsilon * rho_1 + p.c],
            [rho_0, -(u_inf**2) * rho_1],
            [0, 1],
        ],
        dtype=complex,
    )
    return _unit_columns(frame)


def frozen_invariant_frame(matrix, unstable=True, dimension=2):
    """
    Orthonormal basis of the invariant subspace of ``matrix`` belonging to
    its ``dimension`` eigenvalues of largest (``unstable``) or smallest real
    part, from an ordered Schur decomposition.
    """
    sign = 1.0 if unstable else -1.0
    values = np.sort(sign * np.linalg.eigvals(matrix).real)
    upper, lower = values[-dimension], values[-dimension - 1]
    if upper - lower <= DEGENERATE_TOL * max(1.0, abs(upper)):
        raise NearDegenerate(
            "no spectral gap below the leading eigenvalues of the frozen "
            f"coefficient: {values!r}"
        )
    split = 0.5 * (upper + lower)
    _, basis, count = linalg.schur(
        np.asarray(matrix, dtype=complex),
        output="complex",
        sort=lambda value: sign * value.real > split,
    )
    if count != dimension:
        raise NearDegenerate(
            f"ordered Schur form selected {count} eigenvalues, expected {dimension}"
        )
    return basis[:, :dimension]


def morse_index(matrix):
    """Number of eigenvalues with positive real part."""
    return int(np.count_nonzero(np.linalg.eigvals(matrix).real > 0))


def dispersion_curves(p, k_samples, type_three=False):
    """
    The curves where an asymptotic matrix has a purely imaginary eigenvalue
    ik, plus the right envelope of the essential spectrum and the absolute
    spectrum edge as a single-point row.

    With ``type_three`` the right-hand curves come from B_+ instead of A_+.
    """
    k = np.asarray(k_samples, dtype=float)
    eps, c = p.epsilon, p.c
    curves = [
        DispersionCurve("A_minus_1", k, -eps * k**2 - 1 + 1j * c * k),
        DispersionCurve("A_minus_0", k, -eps * k**2 + 1j * c * k),
    ]
    if type_three:
        curves += [
            DispersionCurve("B_plus_0", k, (-(k**2) + 1j * c * k) / eps),
            DispersionCurve("B_plus_1", k, (eps - k**2 + 1j * c * k) / eps),
        ]
    else:
        curves += [
            DispersionCurve("A_plus_0", k, -eps * k**2 + 1j * c * k),
            DispersionCurve("A_plus_1", k, 1 - eps * k**2 + 1j * c * k),
        ]
    curves.append(DispersionCurve("Omega1_boundary", k, 1 - eps * k**2 + 1j * c * k))
    curves.append(
        DispersionCurve(
            "absolute_edge", np.array([0.0]), np.array([absolute_spectrum_edge(p)])
        )
    )
    return curves


def verify_dispersion_curve(curve, p, atol=1e-10):
    """
    Check that every sample of a dispersion curve gives the matching matrix
    an eigenvalue ik; returns the largest distance found.
    """
    if curve.label in ("Omega1_boundary", "absolute_edge"):
        return 0.0
    worst = 0.0
    for k, lam in zip(curve.k, curve.lam):
        a_minus, a_plus, b_plus = asymptotic_matrices(lam, p)
        matrix = {"A_minus": a_minus, "A_plus": a_plus, "B_plus": b_plus}[
            curve.label.rsplit("_", 1)[0]
        ]
        scale = max(1.0, np.abs(matrix).max())
        distance = np.min(np.abs(np.linalg.eigvals(matrix) - 1j * k)) / scale
        worst = max(worst, distance)
    if worst > atol:
        logger.warning(
            "Dispersion curve %s misses ik by %.3e", curve.label, worst
        )
    return worst


def absolute_spectrum_edge(p):
    if p.epsilon == 0:
        return -np.inf
    return 1 - p.c**2 / (4 * p.epsilon)


def weight_interval(p):
    """
    Exponents nu for which the weight e^(nu z) on z > 0 moves the essential
    spectrum into the open left half plane.
    """
    disc = p.c**2 - 4 * p.epsilon
    if disc <= 0:
        raise NoStabilisingWeight(
            f"c**2 = {p.c**2:.6g} does not exceed 4*epsilon = {4 * p.epsilon:.6g}"
        )
    if p.epsilon == 0:
        return 1 / p.c, np.inf
    root = np.sqrt(disc)
    return (p.c - root) / (2 * p.epsilon), (p.c + root) / (2 * p.epsilon)


def weighted_dispersion_shift(nu, p, k_samples):
    """
    Dispersion curves of A_+ in the space weighted by e^(nu z) on the right.
    """
    k = np.asarray(k_samples, dtype=float)
    shifted = 1j * k - nu
    base = p.epsilon * shifted**2 + p.c * shifted
    return [
        DispersionCurve("A_plus_0_weighted", k, base),
        DispersionCurve("A_plus_1_weighted", k, base + 1),
    ]


def region_classify(lam, p, tol=1e-12):
    """
    Place ``lam`` relative to the essential spectrum. Points on a bounding
    dispersion curve count as essential spectrum.
    """
    lam = complex(lam)
    k = lam.imag / p.c
    right = 1 - p.epsilon * k**2
    left = -1 - p.epsilon * k**2
    if lam.real > right + tol:
        region = Region.OMEGA1
    elif lam.real < left - tol:
        region = Region.OMEGA2
    else:
        region = Region.ESSENTIAL_SPECTRUM

    middle = -p.epsilon * k**2
    gaps = (abs(lam.real - edge) for edge in (left, middle, right))
    if p.epsilon > 0 and min(gaps) > 1e-6:
        a_minus, a_plus, _ = asymptotic_matrices(lam, p)
        indices = morse_index(a_minus), morse_index(a_plus)
        if indices[0] != indices[1]:
            expected = Region.ESSENTIAL_SPECTRUM
        else:
            expected = Region.OMEGA1 if indices[0] == 2 else Region.OMEGA2
        if expected is not region:
            raise RiccatiEvansError(
                f"Morse indices {indices} at lambda = {lam!r} contradict region "
                f"{region.value}"
            )
    return region
