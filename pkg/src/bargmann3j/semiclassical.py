"""Leading-order asymptotics of the 3j-symbol.

    (j1 j2 j3; m1 m2 m3) ~ cos(S + pi/4) / sqrt(2 pi |dz|)

S is the phase of the half-shifted phase function f1 at the stationary point
(closed form: five arccos terms with lengths J_r = j_r + 1/2) and dz is the
xy-projected area of the angular-momentum triangle.

Branch convention for Im f / Im f1
----------------------------------
The shifted coefficients j_r + 1/2 +- m_r are half-odd integers, so the
principal branch applied term by term only fixes Im f1 modulo pi.  The
default ``"paired"`` branch groups the two components of each spinor into
the sum phase arg(conj(z1) conj(z2)) (weight J_r) and the relative phase
arg(conj(z1) z2) (weight m_r), and measures each determinant against its sign
in the reference orientation (d3 is negative there).  With this choice
Im f1(p) agrees with the closed-form S modulo 2 pi and Im f1(p') = -Im f1(p).
``"principal"`` gives the literal term-by-term principal logarithms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exact import normalization_N
from .geometry import (
    EPS_CAUSTIC,
    EPS_FUZZ,
    EVEN_PERMUTATIONS,
    Branch,
    Classification,
    ClassicallyForbidden,
    GeometryError,
    PolarDegenerate,
    PolarSingularity,
    classify_configuration,
    determinants,
    interior_angles,
    stationary_point,
    tilt_angle_beta,
    twist_angle_gamma,
)
from .halfint import JmConfig

__all__ = [
    "Convention",
    "SignConvention",
    "CausticError",
    "LogSingularity",
    "PhaseEval",
    "AsymptoticResult",
    "EPS_LOG",
    "REFERENCE_DET_SIGNS",
    "phase_function_f",
    "phase_eval",
    "phase_S_closed_form",
    "projected_area_delta_z",
    "asymptotic_3j",
    "log_prefactor",
    "prefactor_check",
    "wrap_angle",
]

EPS_LOG = 1e-12
REFERENCE_DET_SIGNS = (1.0, 1.0, -1.0)


class Convention(enum.Enum):
    """Which side lengths enter the geometry.

    PAPER_LITERAL: J_r = j_r + 1/2 in S, plain j_r for the projected area.
    HALF_SHIFT: j_r + 1/2 everywhere.
    """

    PAPER_LITERAL = "paper-literal"
    HALF_SHIFT = "half-shift"

    @property
    def area_shift(self) -> float:
        return 0.5 if self is Convention.HALF_SHIFT else 0.0

    def __str__(self):
        return self.value


class SignConvention(enum.Enum):
    """Overall sign attached to the (sign-ambiguous) leading-order formula.

    PONZANO_REGGE multiplies by (-1)**(j1 - j2 - m3), the phase factor that
    accompanies the cosine in the classical Ponzano-Regge form.  None of the
    three reproduces the exact sign everywhere; the result is always flagged
    ``sign_determined=False``.
    """

    PLUS = "plus"
    MINUS = "minus"
    PONZANO_REGGE = "ponzano-regge"

    def factor(self, c: JmConfig) -> int:
        if self is SignConvention.PLUS:
            return 1
        if self is SignConvention.MINUS:
            return -1
        tj, tm = c.twice_j, c.twice_m
        return -1 if ((tj[0] - tj[1] - tm[2]) // 2) % 2 else 1

    def __str__(self):
        return self.value


class CausticError(GeometryError):
    pass


class LogSingularity(ValueError):
    pass


def wrap_angle(x: float) -> float:
    """Reduce to (-pi, pi]."""
    y = math.fmod(x, 2 * math.pi)
    if y <= -math.pi:
        y += 2 * math.pi
    elif y > math.pi:
        y -= 2 * math.pi
    return y


def _coefficients(c: JmConfig, shifted: bool):
    half = 0.5 if shifted else 0.0
    j = np.array(c.jf) + half
    m = np.array(c.mf)
    k = np.array(c.k_values(), dtype=float) + half
    return j, m, k


def phase_function_f(
    z, c: JmConfig, shifted: bool = False, branch: str = "paired", eps: float = EPS_LOG
) -> complex:
    """ln conj(psi_jm) + ln psi_inv - sum |z|^2, dropping normalization constants.

    ``shifted`` replaces every j_r by j_r + 1/2 (hence k_i by k_i + 1/2).
    """
    z = np.asarray(z, dtype=complex)
    d = determinants(z)
    if np.min(abs(z)) < eps or np.min(abs(d)) < eps:
        raise LogSingularity("a spinor component or determinant vanishes")
    j, m, k = _coefficients(c, shifted)
    n1, n2 = j + m, j - m
    re = (
        float(np.sum(n1 * np.log(abs(z[:, 0])) + n2 * np.log(abs(z[:, 1]))))
        + float(np.sum(k * np.log(abs(d))))
        - float(np.sum(abs(z) ** 2))
    )
    if branch == "principal":
        im = float(np.sum(n1 * np.angle(np.conj(z[:, 0])) + n2 * np.angle(np.conj(z[:, 1]))))
        im += float(np.sum(k * np.angle(d)))
    elif branch == "paired":
        total_phase = np.angle(np.conj(z[:, 0]) * np.conj(z[:, 1]))
        relative_phase = np.angle(np.conj(z[:, 0]) * z[:, 1])
        im = float(np.sum(j * total_phase + m * relative_phase))
        im += float(np.sum(k * np.angle(d * np.array(REFERENCE_DET_SIGNS))))
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return complex(re, im)


@dataclass(frozen=True)
class PhaseEval:
    f: complex
    f1: complex
    S: float
    reF: float


def phase_eval(c: JmConfig, convention: Convention = Convention.HALF_SHIFT) -> PhaseEval:
    """f and f1 at the p-branch stationary point built from lengths j_r + shift."""
    st = stationary_point(tuple(x + convention.area_shift for x in c.jf), c.mf, Branch.P)
    f = phase_function_f(st.spinors, c, shifted=False)
    f1 = phase_function_f(st.spinors, c, shifted=True)
    return PhaseEval(f=f, f1=f1, S=phase_S_closed_form(c, convention), reF=f.real)


def _clamped_acos(x: float, fuzz: float) -> float:
    if abs(x) > 1.0 + fuzz:
        raise ClassicallyForbidden(f"arccos argument {x:.12g} out of range")
    return math.acos(max(-1.0, min(1.0, x)))


def _closed_form_S(J, m, eps, fuzz):
    J1, J2, J3 = J
    m1, m2, _ = m
    ang = interior_angles(J, eps)
    beta = tilt_angle_beta(J3, m[2])
    gamma = twist_angle_gamma(J1, m1, beta, ang.eta2, eps, fuzz)
    cb, sb = math.cos(beta), math.sin(beta)
    c1, s1 = math.cos(ang.eta1), math.sin(ang.eta1)
    c2, s2 = math.cos(ang.eta2), math.sin(ang.eta2)
    perp1 = math.sqrt(J1 * J1 - m1 * m1)
    perp2 = math.sqrt(J2 * J2 - m2 * m2)
    if perp1 <= eps or perp2 <= eps:
        raise PolarSingularity("J1 or J2 aligned with the z-axis")
    acos = lambda x: _clamped_acos(x, fuzz)  # noqa: E731
    return (
        J1 * acos((J1 * cb - m1 * c2) / (s2 * perp1))
        + J2 * acos((m2 * c1 - J2 * cb) / (s1 * perp2))
        + J3 * gamma
        + m1 * acos((J1 * c2 - m1 * cb) / (sb * perp1))
        - m2 * acos((J2 * c1 - m2 * cb) / (sb * perp2))
    )


def phase_S_closed_form(
    c: JmConfig,
    convention: Convention = Convention.HALF_SHIFT,
    eps: float = EPS_CAUSTIC,
    fuzz: float = EPS_FUZZ,
) -> float:
    """Closed-form asymptotic phase with J_r = j_r + 1/2 (not reduced mod 2 pi).

    Both conventions use the half-shifted lengths here; they differ only in
    the projected area.
    """
    del convention
    J = tuple(x + 0.5 for x in c.jf)
    m = c.mf
    for perm in EVEN_PERMUTATIONS:
        try:
            return _closed_form_S(tuple(J[p] for p in perm), tuple(m[p] for p in perm), eps, fuzz)
        except PolarSingularity:
            continue
    raise PolarDegenerate(f"{c}: every column ordering is polar")


def projected_area_delta_z(v1, v2) -> float:
    return 0.5 * (float(v1[0]) * float(v2[1]) - float(v2[0]) * float(v1[1]))


@dataclass(frozen=True)
class AsymptoticResult:
    S: float
    delta_z: float
    amplitude: float
    value: float
    convention: Convention
    sign_convention: SignConvention
    im_f1_p: Optional[float]
    im_f1_pprime: Optional[float]
    # the asymptotic formula only fixes the value up to an overall sign
    sign_determined: bool = False

    @property
    def S_reduced(self) -> float:
        return wrap_angle(self.S)


def _require_allowed(c: JmConfig, shift: float, eps: float, fuzz: float) -> None:
    status = classify_configuration(c, shift=shift, eps=eps, fuzz=fuzz)
    if status is Classification.ALLOWED:
        return
    if status is Classification.FORBIDDEN:
        raise ClassicallyForbidden(f"{c} is classically forbidden")
    if status is Classification.CAUSTIC:
        raise CausticError(f"{c} lies on a caustic")
    raise PolarDegenerate(f"{c}: every column ordering is polar")


def asymptotic_3j(
    c: JmConfig,
    convention: Convention = Convention.HALF_SHIFT,
    sign_convention: SignConvention = SignConvention.PLUS,
    eps: float = EPS_CAUSTIC,
    fuzz: float = EPS_FUZZ,
) -> AsymptoticResult:
    # the classical status is that of the length-j triangle; the shifted
    # geometry used for S (and possibly dz) must be regular as well
    _require_allowed(c, 0.0, eps, fuzz)
    _require_allowed(c, 0.5, eps, fuzz)
    shift = convention.area_shift
    S = phase_S_closed_form(c, convention, eps, fuzz)
    st = stationary_point(tuple(x + shift for x in c.jf), c.mf, Branch.P, eps, fuzz)
    dz = projected_area_delta_z(st.vectors[0], st.vectors[1])
    if abs(dz) <= eps:
        raise CausticError(f"{c}: projected area {dz:.3g} vanishes")
    amp = 1.0 / math.sqrt(2 * math.pi * abs(dz))
    value = sign_convention.factor(c) * math.cos(S + math.pi / 4) * amp

    im_p = im_pp = None
    half = tuple(x + 0.5 for x in c.jf)
    try:
        zp = stationary_point(half, c.mf, Branch.P, eps, fuzz).spinors
        zpp = stationary_point(half, c.mf, Branch.PPRIME, eps, fuzz).spinors
        im_p = phase_function_f(zp, c, shifted=True).imag
        im_pp = phase_function_f(zpp, c, shifted=True).imag
    except LogSingularity:
        pass
    return AsymptoticResult(
        S=S,
        delta_z=dz,
        amplitude=amp,
        value=value,
        convention=convention,
        sign_convention=sign_convention,
        im_f1_p=im_p,
        im_f1_pprime=im_pp,
    )


def log_prefactor(c: JmConfig, convention: Convention = Convention.HALF_SHIFT) -> float:
    """log of (2 pi)^8 N exp(Re f1(p)) / 2^6 with N exact."""
    st = stationary_point(tuple(x + convention.area_shift for x in c.jf), c.mf, Branch.P)
    ref1 = phase_function_f(st.spinors, c, shifted=True).real
    return 8 * math.log(2 * math.pi) + normalization_N(c).log_value + ref1 - 6 * math.log(2)


def prefactor_check(c: JmConfig, convention: Convention = Convention.HALF_SHIFT) -> float:
    """Prefactor times sqrt(2 pi); tends to 1 as the quantum numbers grow."""
    _require_allowed(c, convention.area_shift, EPS_CAUSTIC, EPS_FUZZ)
    return math.exp(log_prefactor(c, convention) + 0.5 * math.log(2 * math.pi))
