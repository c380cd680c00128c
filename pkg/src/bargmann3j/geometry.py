"""Stationary points of the overlap integral: triangle, rotations and Hopf lifts.

A stationary point is three spinors whose Hopf images J_r have lengths j_r,
prescribed z-projections m_r and close into a triangle.  It is built by
placing the triangle in the xz-plane with J3 on the z-axis (real reference
spinors), tilting about y by beta so that J3z = m3 and twisting about J3 by
gamma so that J1z = m1.  The second branch uses -gamma.

Array conventions: a spinor triple is a complex array of shape (3, 2) with
``z[r, mu]`` the 1-based z_{r+1, mu+1}; vectors are real arrays of shape
(3, 3), one row per angular momentum.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exact import InvalidConfig
from .halfint import JmConfig, SelectionOutcome, selection_rules

__all__ = [
    "EPS_CAUSTIC",
    "EPS_FUZZ",
    "GeometryError",
    "DegenerateTriangle",
    "OutOfRange",
    "ClassicallyForbidden",
    "PolarSingularity",
    "PolarDegenerate",
    "Branch",
    "Classification",
    "TriangleAngles",
    "StationaryPoint",
    "interior_angles",
    "tilt_angle_beta",
    "twist_angle_gamma",
    "reference_spinors",
    "su2_lift",
    "z_rotation",
    "stationary_point",
    "stationary_spinors",
    "stationary_vectors",
    "hopf_project",
    "hopf_vectors",
    "determinants",
    "stationarity_residual",
    "classify_configuration",
    "EVEN_PERMUTATIONS",
]

EPS_CAUSTIC = 1e-9
EPS_FUZZ = 1e-9

# cyclic column orders; they leave the 3j-symbol and the determinants' roles intact
EVEN_PERMUTATIONS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


class GeometryError(ValueError):
    """No regular real stationary point exists for the requested input."""


class DegenerateTriangle(GeometryError):
    pass


class OutOfRange(GeometryError):
    pass


class ClassicallyForbidden(GeometryError):
    pass


class PolarSingularity(GeometryError):
    pass


class PolarDegenerate(GeometryError):
    """Every even column ordering puts a vector on the z-axis."""


class Branch(enum.Enum):
    P = "p"
    PPRIME = "p'"

    @property
    def twist_sign(self) -> int:
        return 1 if self is Branch.P else -1


class Classification(enum.Enum):
    ALLOWED = "Allowed"
    FORBIDDEN = "Forbidden"
    CAUSTIC = "Caustic"
    POLAR_DEGENERATE = "PolarDegenerate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TriangleAngles:
    """Angles eta_r in [0, pi] between J_r and the direction opposite its neighbour."""

    eta1: float
    eta2: float
    eta3: float


@dataclass(frozen=True)
class StationaryPoint:
    angles: TriangleAngles
    beta: float
    gamma: float
    branch: Branch
    spinors: np.ndarray
    vectors: np.ndarray
    lengths: tuple[float, float, float]
    m: tuple[float, float, float]
    # column order used for the construction: column r was built as perm.index(r)
    perm: tuple[int, int, int] = (0, 1, 2)


def _cos_eta(a: float, b: float, c: float) -> float:
    return (a * a - b * b - c * c) / (2.0 * b * c)


def interior_angles(j: Sequence[float], eps: float = EPS_CAUSTIC) -> TriangleAngles:
    j1, j2, j3 = (float(x) for x in j)
    if min(j1, j2, j3) <= 0.0:
        raise DegenerateTriangle(f"non-positive side in {tuple(j)}")
    cosines = (_cos_eta(j1, j2, j3), _cos_eta(j2, j3, j1), _cos_eta(j3, j1, j2))
    if any(abs(x) >= 1.0 - eps for x in cosines):
        raise DegenerateTriangle(f"sides {tuple(j)} do not form a proper triangle")
    return TriangleAngles(*(math.acos(x) for x in cosines))


def tilt_angle_beta(j3: float, m3: float) -> float:
    j3, m3 = float(j3), float(m3)
    if j3 <= 0.0 or abs(m3) > j3 * (1.0 + 1e-15):
        raise OutOfRange(f"|m3| = {abs(m3)} exceeds j3 = {j3}")
    return math.acos(max(-1.0, min(1.0, m3 / j3)))


def _gamma_argument(j1, m1, beta, eta2, eps):
    denom = j1 * math.sin(beta) * math.sin(eta2)
    if math.sin(beta) * math.sin(eta2) <= eps:
        raise PolarSingularity("sin(beta) sin(eta2) vanishes; twist angle undefined")
    return (j1 * math.cos(beta) * math.cos(eta2) - m1) / denom


def twist_angle_gamma(
    j1: float, m1: float, beta: float, eta2: float, eps: float = EPS_CAUSTIC, fuzz: float = EPS_FUZZ
) -> float:
    """Root in [0, pi] of the twist condition J1z = m1; the other root is its negative."""
    arg = _gamma_argument(float(j1), float(m1), float(beta), float(eta2), eps)
    if abs(arg) > 1.0 + fuzz:
        raise ClassicallyForbidden(f"cos(gamma) = {arg:.12g} outside [-1, 1]")
    return math.acos(max(-1.0, min(1.0, arg)))


def reference_spinors(j: Sequence[float], angles: TriangleAngles) -> np.ndarray:
    j1, j2, j3 = (float(x) for x in j)
    e1, e2 = angles.eta1, angles.eta2
    return np.array(
        [
            math.sqrt(2 * j1) * np.array([math.cos(e2 / 2), math.sin(e2 / 2)]),
            math.sqrt(2 * j2) * np.array([math.cos(e1 / 2), -math.sin(e1 / 2)]),
            math.sqrt(2 * j3) * np.array([1.0, 0.0]),
        ],
        dtype=complex,
    )


def su2_lift(beta: float, gamma: float) -> np.ndarray:
    """u(y, beta) u(z, gamma)."""
    cb, sb = math.cos(beta / 2), math.sin(beta / 2)
    em, ep = np.exp(-0.5j * gamma), np.exp(0.5j * gamma)
    return np.array([[em * cb, -ep * sb], [em * sb, ep * cb]])


def z_rotation(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def hopf_project(s) -> tuple[np.ndarray, float]:
    """Spinor (z1, z2) -> (J, I) with J = (Re w, Im w, (|z1|^2-|z2|^2)/2), w = conj(z1) z2."""
    z1, z2 = complex(s[0]), complex(s[1])
    w = z1.conjugate() * z2
    a, b = abs(z1) ** 2, abs(z2) ** 2
    return np.array([w.real, w.imag, 0.5 * (a - b)]), 0.5 * (a + b)


def hopf_vectors(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    w = np.conj(z[:, 0]) * z[:, 1]
    return np.stack([w.real, w.imag, 0.5 * (abs(z[:, 0]) ** 2 - abs(z[:, 1]) ** 2)], axis=1)


def determinants(z: np.ndarray) -> np.ndarray:
    """(d1, d2, d3) = (z21 z32 - z31 z22, z31 z12 - z11 z32, z11 z22 - z21 z12)."""
    z = np.asarray(z)
    return np.array(
        [
            z[1, 0] * z[2, 1] - z[2, 0] * z[1, 1],
            z[2, 0] * z[0, 1] - z[0, 0] * z[2, 1],
            z[0, 0] * z[1, 1] - z[1, 0] * z[0, 1],
        ]
    )


def _closed_form_vectors(j, angles, beta, gamma):
    j1, j2, j3 = j
    cb, sb = math.cos(beta), math.sin(beta)
    cg, sg = math.cos(gamma), math.sin(gamma)
    s1, c1 = math.sin(angles.eta1), math.cos(angles.eta1)
    s2, c2 = math.sin(angles.eta2), math.cos(angles.eta2)
    return np.array(
        [
            j1 * np.array([cb * cg * s2 + sb * c2, sg * s2, -sb * cg * s2 + cb * c2]),
            j2 * np.array([-cb * cg * s1 + sb * c1, -sg * s1, sb * cg * s1 + cb * c1]),
            j3 * np.array([sb, 0.0, cb]),
        ]
    )


def _build(j, m, branch, eps, fuzz):
    angles = interior_angles(j, eps)
    beta = tilt_angle_beta(j[2], m[2])
    gamma = twist_angle_gamma(j[0], m[0], beta, angles.eta2, eps, fuzz)
    g = branch.twist_sign * gamma
    z = reference_spinors(j, angles) @ su2_lift(beta, g).T
    vec = _closed_form_vectors(j, angles, beta, g)
    return angles, beta, gamma, z, vec


def stationary_point(
    j: Sequence[float],
    m: Sequence[float],
    branch: Branch = Branch.P,
    eps: float = EPS_CAUSTIC,
    fuzz: float = EPS_FUZZ,
) -> StationaryPoint:
    """Construct the stationary point for lengths j and projections m.

    If the twist angle is undefined because a vector sits on the z-axis, the
    columns are cycled (even permutations) and the result is mapped back to the
    caller's column order.
    """
    j = tuple(float(x) for x in j)
    m = tuple(float(x) for x in m)
    last_polar = None
    for perm in EVEN_PERMUTATIONS:
        pj = tuple(j[p] for p in perm)
        pm = tuple(m[p] for p in perm)
        try:
            angles, beta, gamma, z, vec = _build(pj, pm, branch, eps, fuzz)
        except PolarSingularity as exc:
            last_polar = exc
            continue
        inv = np.argsort(perm)
        return StationaryPoint(
            angles=angles,
            beta=beta,
            gamma=gamma,
            branch=branch,
            spinors=z[inv],
            vectors=vec[inv],
            lengths=j,
            m=m,
            perm=perm,
        )
    raise PolarDegenerate(f"no column ordering avoids the pole: {last_polar}")


def stationary_spinors(j, m, branch: Branch = Branch.P) -> np.ndarray:
    return stationary_point(j, m, branch).spinors


def stationary_vectors(j, m, branch: Branch = Branch.P) -> np.ndarray:
    return stationary_point(j, m, branch).vectors


def stationarity_residual(st, j: Sequence[float], m: Sequence[float]) -> float:
    """Largest violation of I_r = j_r, J_rz = m_r, sum_r J_r = 0 (scaled by max(1, j))."""
    z = st.spinors if isinstance(st, StationaryPoint) else np.asarray(st, dtype=complex)
    j = np.asarray(j, dtype=float)
    m = np.asarray(m, dtype=float)
    vec = hopf_vectors(z)
    norms = 0.5 * np.sum(abs(z) ** 2, axis=1)
    scale = max(1.0, float(np.max(j)))
    worst = max(
        float(np.max(abs(norms - j))),
        float(np.max(abs(vec[:, 2] - m))),
        float(np.max(abs(vec.sum(axis=0)))),
    )
    return worst / scale


def classify_configuration(
    c: JmConfig, shift: float = 0.0, eps: float = EPS_CAUSTIC, fuzz: float = EPS_FUZZ
) -> Classification:
    """Classify the classical geometry of c with side lengths j_r + shift."""
    outcome = selection_rules(c)
    if outcome is not SelectionOutcome.VALID:
        raise InvalidConfig(f"{c}: {outcome}")
    j = tuple(x + shift for x in c.jf)
    m = c.mf
    try:
        angles = interior_angles(j, eps)
    except DegenerateTriangle:
        return Classification.CAUSTIC
    del angles
    for perm in EVEN_PERMUTATIONS:
        pj = tuple(j[p] for p in perm)
        pm = tuple(m[p] for p in perm)
        pang = interior_angles(pj, eps)
        beta = tilt_angle_beta(pj[2], pm[2])
        try:
            arg = _gamma_argument(pj[0], pm[0], beta, pang.eta2, eps)
        except PolarSingularity:
            continue
        if abs(arg) > 1.0 + fuzz:
            return Classification.FORBIDDEN
        if abs(arg) >= 1.0 - eps:
            return Classification.CAUSTIC
        return Classification.ALLOWED
    return Classification.POLAR_DEGENERATE
