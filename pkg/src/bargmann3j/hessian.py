"""Second-order structure of the phase function in reduced coordinates.

The 12 real coordinates of the three spinors split into the 4-torus of gauge
directions (one overall z-rotation, three spinor phases) and eight transversal
ones

    q = (Phi1, Phi2, R1, R2, R3, r12, r22, r32),

with Z_s = z_s1 / z_s2 = R_s exp(i Phi_s), r_s2 = |z_s2| and the gauge fixed by
Phi3 = 0 and arg z_s2 = 0.  In these coordinates

    f = sum_s (j_s + m_s) ln conj(Z_s) + k1 ln(Z2 - Z3) + k2 ln(Z3 - Z1)
        + k3 ln(Z1 - Z2) - sum_s r_s2^2 (1 + R_s^2) + sum_s 4 j_s ln r_s2.

The hand-derived Hessian uses the first-derivative conditions in its three
R_s R_s entries, so it is exact only at a stationary point; ``off_shell=True``
restores the dropped gradient terms.

Determinant bookkeeping, all at a stationary point:

    det(direct 8x8)              = g (g1 g2 - g3 g4) * prod_s r_s2^2
    g (g1 g2 - g3 g4)            = 4i g dz
    Cartesian Hessian determinant = det(direct) / prod_s (r_s1 r_s2^2)^2
                                 = i 4^7 dz / (prod conj(z) * d1 d2 d3)

The last expression is what the stationary-phase formula needs, because the
volume element in reduced coordinates is prod_s r_s1 r_s2^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .exact import normalization_N
from .geometry import Branch, determinants, hopf_vectors, stationary_point
from .halfint import JmConfig
from .semiclassical import LogSingularity, phase_function_f, projected_area_delta_z

__all__ = [
    "CoordinateSingularity",
    "ReducedCoords",
    "HessianReport",
    "COORD_NAMES",
    "HESSIAN_NONZERO",
    "to_reduced",
    "from_reduced",
    "f_reduced",
    "grad_f_reduced",
    "hessian_analytic",
    "hessian_det_direct",
    "g_factors",
    "hessian_det_reduced",
    "eliminated_diagonal",
    "jacobian_factor",
    "cartesian_hessian_det",
    "hessian_closed_form",
    "fd_gradient",
    "fd_hessian",
    "max_relative_error",
    "stationary_reduced",
    "hessian_report",
    "formula1_amplitude",
    "formula2_amplitude",
]

EPS_COORD = 1e-12
COORD_NAMES = ("Phi1", "Phi2", "R1", "R2", "R3", "r12", "r22", "r32")

# upper-triangle positions of the 21 hand-derived second derivatives
HESSIAN_NONZERO = frozenset(
    [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 1), (1, 2), (1, 3), (1, 4)]
    + [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4)]
    + [(2, 5), (3, 6), (4, 7), (5, 5), (6, 6), (7, 7)]
)


class CoordinateSingularity(ValueError):
    pass


@dataclass(frozen=True)
class ReducedCoords:
    Phi1: float
    Phi2: float
    R1: float
    R2: float
    R3: float
    r12: float
    r22: float
    r32: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in COORD_NAMES], dtype=float)

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "ReducedCoords":
        return cls(*(float(x) for x in a))

    @property
    def Z(self) -> np.ndarray:
        return np.array(
            [self.R1 * np.exp(1j * self.Phi1), self.R2 * np.exp(1j * self.Phi2), complex(self.R3)]
        )

    @property
    def R(self) -> np.ndarray:
        return np.array([self.R1, self.R2, self.R3])

    @property
    def r(self) -> np.ndarray:
        return np.array([self.r12, self.r22, self.r32])


def to_reduced(z, eps: float = EPS_COORD) -> ReducedCoords:
    """Reduced coordinates of a spinor triple, with the z-rotation gauge removed.

    Phi_s is arg z_s1 - arg z_s2 measured relative to the same quantity for
    s = 3, so that Phi3 = 0.
    """
    z = np.asarray(z, dtype=complex)
    if np.min(abs(z[:, 1])) < eps:
        raise CoordinateSingularity("a lower spinor component vanishes (m_s = j_s)")
    rel = np.angle(z[:, 0]) - np.angle(z[:, 1])
    phi = [math.remainder(float(rel[s] - rel[2]), 2 * math.pi) for s in (0, 1)]
    R = abs(z[:, 0]) / abs(z[:, 1])
    return ReducedCoords(phi[0], phi[1], *(float(x) for x in R), *(float(x) for x in abs(z[:, 1])))


def from_reduced(q: ReducedCoords) -> np.ndarray:
    """Representative spinor triple in the gauge Phi3 = 0, z_s2 real positive."""
    r = q.r
    return np.stack([q.Z * r, r.astype(complex)], axis=1)


def _kjm(c: JmConfig):
    return np.array(c.k_values(), dtype=float), np.array(c.jf), np.array(c.mf)


def f_reduced(q: ReducedCoords, c: JmConfig, eps: float = EPS_COORD) -> complex:
    Z = q.Z
    (k1, k2, k3), j, m = _kjm(c)
    diffs = (Z[1] - Z[2], Z[2] - Z[0], Z[0] - Z[1])
    if min(abs(d) for d in diffs) < eps:
        raise LogSingularity("two of the Z_s coincide")
    R, r = q.R, q.r
    val = complex(np.sum((j + m) * np.log(np.conj(Z))))
    val += k1 * np.log(diffs[0]) + k2 * np.log(diffs[1]) + k3 * np.log(diffs[2])
    val += float(np.sum(-(r**2) * (1 + R**2) + 4 * j * np.log(r)))
    return complex(val)


def _f_reduced_mp(x, c: JmConfig):
    """f_reduced in mpmath arithmetic; x is a sequence of 8 mpf values."""
    (k1, k2, k3) = c.k_values()
    j = [mpmath.mpf(t) / 2 for t in c.twice_j]
    m = [mpmath.mpf(t) / 2 for t in c.twice_m]
    Z = [x[2] * mpmath.expj(x[0]), x[3] * mpmath.expj(x[1]), mpmath.mpc(x[4])]
    val = mpmath.mpc(0)
    for s in range(3):
        R, r = x[2 + s], x[5 + s]
        val += (j[s] + m[s]) * mpmath.log(mpmath.conj(Z[s]))
        val += -r * r * (1 + R * R) + 4 * j[s] * mpmath.log(r)
    val += k1 * mpmath.log(Z[1] - Z[2]) + k2 * mpmath.log(Z[2] - Z[0]) + k3 * mpmath.log(Z[0] - Z[1])
    return val


def grad_f_reduced(q: ReducedCoords, c: JmConfig) -> np.ndarray:
    Z1, Z2, Z3 = q.Z
    e1, e2 = np.exp(1j * q.Phi1), np.exp(1j * q.Phi2)
    (k1, k2, k3), j, m = _kjm(c)
    R, r = q.R, q.r
    A, B, C = Z3 - Z1, Z1 - Z2, Z2 - Z3
    g = np.empty(8, dtype=complex)
    g[0] = -1j * (j[0] + m[0]) - 1j * k2 * Z1 / A + 1j * k3 * Z1 / B
    g[1] = -1j * (j[1] + m[1]) + 1j * k1 * Z2 / C - 1j * k3 * Z2 / B
    g[2] = ((j[0] + m[0]) - k2 * Z1 / A + k3 * Z1 / B - 2 * r[0] ** 2 * R[0] ** 2) / R[0]
    g[3] = ((j[1] + m[1]) + k1 * Z2 / C - k3 * Z2 / B - 2 * r[1] ** 2 * R[1] ** 2) / R[1]
    g[4] = ((j[2] + m[2]) - k1 * Z3 / C + k2 * Z3 / A - 2 * r[2] ** 2 * R[2] ** 2) / R[2]
    g[5:] = -2 * (1 + R**2) * r + 4 * j / r
    return g


def hessian_analytic(q: ReducedCoords, c: JmConfig, off_shell: bool = False) -> np.ndarray:
    """The 21 hand-derived second derivatives, symmetrized into an 8x8 matrix.

    The R_s R_s entries use the first-derivative conditions; pass
    ``off_shell=True`` to add back -(1/R_s) df/dR_s and get the exact Hessian
    away from stationary points.
    """
    Z1, Z2, Z3 = q.Z
    e1, e2 = np.exp(1j * q.Phi1), np.exp(1j * q.Phi2)
    (k1, k2, k3), j, _ = _kjm(c)
    R, r = q.R, q.r
    A, B, C = (Z3 - Z1) ** 2, (Z1 - Z2) ** 2, (Z2 - Z3) ** 2
    H = np.zeros((8, 8), dtype=complex)
    H[0, 0] = k2 * Z1 * Z3 / A + k3 * Z1 * Z2 / B
    H[0, 1] = -k3 * Z1 * Z2 / B
    H[0, 2] = -1j * (k2 * Z3 * e1 / A + k3 * Z2 * e1 / B)
    H[0, 3] = 1j * k3 * Z1 * e2 / B
    H[0, 4] = 1j * k2 * Z1 / A
    H[1, 1] = k1 * Z2 * Z3 / C + k3 * Z1 * Z2 / B
    H[1, 2] = 1j * k3 * Z2 * e1 / B
    H[1, 3] = -1j * (k1 * Z3 * e2 / C + k3 * Z1 * e2 / B)
    H[1, 4] = 1j * k1 * Z2 / C
    H[2, 2] = -(k2 * Z3 * e1 / (R[0] * A) + k3 * Z2 * e1 / (R[0] * B) + 4 * r[0] ** 2)
    H[2, 3] = k3 * e1 * e2 / B
    H[2, 4] = k2 * e1 / A
    H[3, 3] = -(k1 * Z3 * e2 / (R[1] * C) + k3 * Z1 * e2 / (R[1] * B) + 4 * r[1] ** 2)
    H[3, 4] = k1 * e2 / C
    H[4, 4] = -(k1 * Z2 / (R[2] * C) + k2 * Z1 / (R[2] * A) + 4 * r[2] ** 2)
    for s in range(3):
        H[2 + s, 5 + s] = -4 * r[s] * R[s]
        H[5 + s, 5 + s] = -2 * (1 + R[s] ** 2 + 2 * j[s] / r[s] ** 2)
    if off_shell:
        grad = grad_f_reduced(q, c)
        for s in range(3):
            H[2 + s, 2 + s] -= grad[2 + s] / R[s]
    return H + H.T - np.diag(np.diag(H))


def hessian_det_direct(q: ReducedCoords, c: JmConfig) -> complex:
    return complex(np.linalg.det(hessian_analytic(q, c)))


def g_factors(q: ReducedCoords, c: JmConfig):
    """(g, g1, g2, g3, g4) of the factorized determinant."""
    Z1, Z2, Z3 = q.Z
    k1, k2, k3 = c.k_values()
    g = 4**6 * Z1 * Z2 * Z3 / ((Z1 - Z2) * (Z2 - Z3) * (Z3 - Z1))
    g1 = -k2 * Z2 / (Z3 - Z1) + k3 * Z2 / (Z1 - Z2)
    g2 = k1 * Z3 / (Z2 - Z3) - k3 * Z1 / (Z1 - Z2)
    g3 = k2 * Z3 / (Z3 - Z1) - k3 * Z2 / (Z1 - Z2)
    g4 = -k1 * Z1 / (Z2 - Z3) + k3 * Z1 / (Z1 - Z2)
    return g, g1, g2, g3, g4


def hessian_det_reduced(q: ReducedCoords, c: JmConfig) -> complex:
    """Symmetric form g (g1 g2 - g3 g4); equals det(hessian_analytic) / prod r_s2^2."""
    g, g1, g2, g3, g4 = g_factors(q, c)
    return complex(g * (g1 * g2 - g3 * g4))


def eliminated_diagonal(q: ReducedCoords, c: JmConfig) -> np.ndarray:
    """Diagonal entries 3..8 left after eliminating the R and r couplings.

    (-4 r_s2^2 for the R_s rows, -2(1 - R_s^2 + 2 j_s / r_s2^2) for the r_s2
    rows; the latter equal -4 at a stationary point.)
    """
    _, j, _ = _kjm(c)
    R, r = q.R, q.r
    return np.concatenate([-4 * r**2, -2 * (1 - R**2 + 2 * j / r**2)])


def jacobian_factor(z) -> float:
    """prod_{s, mu} |z_{s mu}|^-2."""
    return float(np.prod(abs(np.asarray(z, dtype=complex)) ** -2.0))


def cartesian_hessian_det(q: ReducedCoords, c: JmConfig) -> complex:
    """det(hessian_analytic) divided by the squared volume factor prod r_s1 r_s2^2."""
    R, r = q.R, q.r
    vol = np.prod(R * r * r**2)
    return hessian_det_direct(q, c) / float(vol) ** 2


def hessian_closed_form(z) -> complex:
    """i 4^7 dz / (prod conj(z_{s mu}) * d1 d2 d3) at a stationary spinor triple."""
    z = np.asarray(z, dtype=complex)
    d = determinants(z)
    if np.min(abs(z)) < EPS_COORD or np.min(abs(d)) < EPS_COORD:
        raise LogSingularity("vanishing spinor component or determinant")
    v = hopf_vectors(z)
    dz = projected_area_delta_z(v[0], v[1])
    return complex(1j * 4**7 * dz / (np.prod(np.conj(z)) * np.prod(d)))


def _steps(q: ReducedCoords, h: float) -> np.ndarray:
    x = q.as_array()
    scale = np.ones(8)
    scale[2:] = np.abs(x[2:])
    return h * scale


def _unwrap(v, ref):
    # integer coefficients: a branch jump of a log changes Im f by a multiple of 2 pi
    d = v - ref
    n = mpmath.nint(d.imag / (2 * mpmath.pi))
    return v - 2j * mpmath.pi * n


def fd_gradient(q: ReducedCoords, c: JmConfig, h: float = 1e-5, dps: int = 40) -> np.ndarray:
    with mpmath.workdps(dps):
        x0 = [mpmath.mpf(v) for v in q.as_array()]
        f0 = _f_reduced_mp(x0, c)
        out = np.empty(8, dtype=complex)
        for i, hi in enumerate(_steps(q, h)):
            hi = mpmath.mpf(hi)
            xp, xm = list(x0), list(x0)
            xp[i] += hi
            xm[i] -= hi
            fp = _unwrap(_f_reduced_mp(xp, c), f0)
            fm = _unwrap(_f_reduced_mp(xm, c), f0)
            out[i] = complex((fp - fm) / (2 * hi))
    return out


def _fd_hessian_once(q, c, h, dps):
    with mpmath.workdps(dps):
        x0 = [mpmath.mpf(v) for v in q.as_array()]
        f0 = _f_reduced_mp(x0, c)
        steps = [mpmath.mpf(v) for v in _steps(q, h)]

        def ev(shifts):
            x = list(x0)
            for i, s in shifts:
                x[i] += s * steps[i]
            return _unwrap(_f_reduced_mp(x, c), f0)

        H = np.empty((8, 8), dtype=complex)
        for i in range(8):
            H[i, i] = complex((ev([(i, 1)]) - 2 * f0 + ev([(i, -1)])) / steps[i] ** 2)
            for k in range(i + 1, 8):
                val = (
                    ev([(i, 1), (k, 1)])
                    - ev([(i, 1), (k, -1)])
                    - ev([(i, -1), (k, 1)])
                    + ev([(i, -1), (k, -1)])
                ) / (4 * steps[i] * steps[k])
                H[i, k] = H[k, i] = complex(val)
    return H


def fd_hessian(
    q: ReducedCoords, c: JmConfig, h: float = 1e-5, dps: int = 40, richardson: bool = True
):
    """Central-difference Hessian of f_reduced evaluated in mpmath.

    Returns (H, err) where err estimates the truncation error from the
    h vs h/2 difference; with ``richardson`` the extrapolated matrix is returned.
    """
    H1 = _fd_hessian_once(q, c, h, dps)
    if not richardson:
        return H1, float("nan")
    H2 = _fd_hessian_once(q, c, h / 2, dps)
    return (4 * H2 - H1) / 3, float(np.max(abs(H2 - H1)))


def max_relative_error(approx: np.ndarray, exact: np.ndarray) -> float:
    """Entrywise relative error; entries that are exactly zero are measured against max|exact|."""
    approx, exact = np.asarray(approx), np.asarray(exact)
    scale = np.where(exact != 0, abs(exact), np.max(abs(exact)))
    return float(np.max(abs(approx - exact) / scale))


def stationary_reduced(c: JmConfig, branch: Branch = Branch.P, shift: float = 0.0):
    """Stationary spinors (lengths j_r + shift) and their reduced coordinates."""
    st = stationary_point(tuple(x + shift for x in c.jf), c.mf, branch)
    return st.spinors, to_reduced(st.spinors)


@dataclass(frozen=True)
class HessianReport:
    analytic_entries: np.ndarray
    fd_entries: np.ndarray
    det_analytic: complex
    det_symmetric: complex
    det_closed_form: complex
    det_cartesian: complex
    max_rel_err: float
    fd_error_estimate: float


def hessian_report(c: JmConfig, branch: Branch = Branch.P, h: float = 1e-5) -> HessianReport:
    z, q = stationary_reduced(c, branch)
    H = hessian_analytic(q, c)
    Hfd, err = fd_hessian(q, c, h)
    return HessianReport(
        analytic_entries=H,
        fd_entries=Hfd,
        det_analytic=complex(np.linalg.det(H)),
        det_symmetric=hessian_det_reduced(q, c),
        det_closed_form=hessian_closed_form(z),
        det_cartesian=cartesian_hessian_det(q, c),
        max_rel_err=max_relative_error(Hfd, H),
        fd_error_estimate=err,
    )


def formula1_amplitude(c: JmConfig) -> float:
    """2 (2 pi)^8 N exp(Re f(p)) / sqrt|Hess_p|, both branches contributing equally."""
    z, _ = stationary_reduced(c)
    ref = phase_function_f(z, c).real
    hess = abs(hessian_closed_form(z))
    log_amp = (
        math.log(2) + 8 * math.log(2 * math.pi) + normalization_N(c).log_value + ref - 0.5 * math.log(hess)
    )
    return math.exp(log_amp)


def formula2_amplitude(c: JmConfig) -> float:
    """(2 pi)^8 N exp(Re f1(p)) / (2^6 sqrt|dz|) at the length-j stationary point."""
    z, _ = stationary_reduced(c)
    ref1 = phase_function_f(z, c, shifted=True).real
    v = hopf_vectors(z)
    dz = abs(projected_area_delta_z(v[0], v[1]))
    log_amp = 8 * math.log(2 * math.pi) + normalization_N(c).log_value + ref1 - 6 * math.log(2)
    return math.exp(log_amp - 0.5 * math.log(dz))
