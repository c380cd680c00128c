"""Verification battery: every numerical identity the package relies on, as suites.

Each suite returns a SuiteResult; ``run_all`` evaluates them in a fixed order
with a seeded generator so that the printed report is reproducible byte for
byte.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .exact import bargmann_moment_3j, racah_3j
from .geometry import (
    Branch,
    Classification,
    classify_configuration,
    hopf_vectors,
    stationarity_residual,
    stationary_point,
    z_rotation,
)
from .halfint import JmConfig, iter_configs
from . import hessian as hs
from .semiclassical import (
    Convention,
    phase_function_f,
    phase_S_closed_form,
    prefactor_check,
    projected_area_delta_z,
    wrap_angle,
)

__all__ = [
    "SuiteResult",
    "random_configs",
    "suite_oracle",
    "suite_stationarity",
    "suite_phase",
    "suite_hessian",
    "suite_prefactor",
    "suite_torus",
    "run_all",
    "format_report",
    "LEVELS",
]

STATIONARITY_TOL = 1e-10
PHASE_TOL = 1e-8
HESSIAN_FD_TOL = 1e-5
HESSIAN_DET_TOL = 1e-9
PREFACTOR_TOL = 0.02
TORUS_AREA_TOL = 1e-12

LEVELS = {
    "fast": {"oracle_max": 12, "n_configs": 1000, "n_hessian": 100, "n_torus": 200},
    "full": {"oracle_max": 16, "n_configs": 5000, "n_hessian": 300, "n_torus": 1000},
}


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _is_interior(c: JmConfig) -> bool:
    return all(abs(m) < j for j, m in zip(c.twice_j, c.twice_m))


def random_configs(
    rng: random.Random,
    n: int,
    min_twice_j: int = 4,
    max_twice_j: int = 200,
    shifts: Iterable[float] = (0.0, 0.5),
    interior: bool = True,
) -> list[JmConfig]:
    """n configurations that are Allowed for every side-length shift in ``shifts``.

    ``interior`` additionally requires |m_r| < j_r, so that no spinor
    component vanishes.
    """
    shifts = tuple(shifts)
    out: list[JmConfig] = []
    while len(out) < n:
        a = rng.randint(min_twice_j, max_twice_j)
        b = rng.randint(min_twice_j, max_twice_j)
        lo, hi = max(abs(a - b), min_twice_j), min(a + b, max_twice_j)
        if lo > hi:
            continue
        cc = rng.randint(lo, hi)
        if (a + b + cc) % 2:
            continue
        m1 = rng.randrange(-a, a + 1, 2)
        m2 = rng.randrange(-b, b + 1, 2)
        m3 = -m1 - m2
        if abs(m3) > cc or (cc - m3) % 2:
            continue
        c = JmConfig.from_twice((a, b, cc), (m1, m2, m3))
        if interior and not _is_interior(c):
            continue
        if all(classify_configuration(c, shift=s) is Classification.ALLOWED for s in shifts):
            out.append(c)
    return out


def suite_oracle(max_twice_j: int = 12) -> SuiteResult:
    n = bad = 0
    for c in iter_configs(max_twice_j):
        n += 1
        if racah_3j(c).value != bargmann_moment_3j(c).value:
            bad += 1
    return SuiteResult("oracle", n > 0 and bad == 0, f"{n} configs with 2j <= {max_twice_j}, {bad} mismatches")


def suite_stationarity(configs: list[JmConfig], tol: float = STATIONARITY_TOL) -> SuiteResult:
    worst = 0.0
    for c in configs:
        for br in Branch:
            worst = max(worst, stationarity_residual(stationary_point(c.jf, c.mf, br), c.jf, c.mf))
    ok = bool(configs) and worst <= tol
    return SuiteResult("stationarity", ok, f"{len(configs)} configs x 2 branches, max residual {worst:.3e}")


def suite_phase(configs: list[JmConfig], tol: float = PHASE_TOL) -> SuiteResult:
    worst_s = worst_b = 0.0
    for c in configs:
        lengths = tuple(x + 0.5 for x in c.jf)
        zp = stationary_point(lengths, c.mf, Branch.P).spinors
        zq = stationary_point(lengths, c.mf, Branch.PPRIME).spinors
        im_p = phase_function_f(zp, c, shifted=True).imag
        im_q = phase_function_f(zq, c, shifted=True).imag
        S = phase_S_closed_form(c)
        worst_s = max(worst_s, abs(wrap_angle(S - im_p)))
        worst_b = max(worst_b, abs(wrap_angle(im_p + im_q)))
    ok = bool(configs) and worst_s <= tol and worst_b <= tol
    return SuiteResult(
        "phase",
        ok,
        f"{len(configs)} configs, max |S - Im f1(p)| {worst_s:.3e}, max |Im f1(p) + Im f1(p')| {worst_b:.3e}",
    )


def _det_spread(c: JmConfig) -> float:
    z, q = hs.stationary_reduced(c)
    closed = hs.hessian_closed_form(z)
    direct = hs.cartesian_hessian_det(q, c)
    symmetric = hs.hessian_det_reduced(q, c) * hs.jacobian_factor(z)
    vals = (direct, symmetric, closed)
    return max(abs(a - b) / abs(b) for a in vals for b in vals)


def _perturbed(q: hs.ReducedCoords, rng: random.Random) -> hs.ReducedCoords:
    x = q.as_array()
    x[:2] += [rng.uniform(-0.3, 0.3) for _ in range(2)]
    x[2:] *= [rng.uniform(0.8, 1.25) for _ in range(6)]
    return hs.ReducedCoords.from_array(x)


def suite_hessian(
    configs: list[JmConfig],
    rng: random.Random,
    fd_tol: float = HESSIAN_FD_TOL,
    det_tol: float = HESSIAN_DET_TOL,
    hessian: Callable = None,
) -> SuiteResult:
    """FD check of the hand-derived Hessian at stationary points (as printed) and
    at perturbed points (with the off-shell terms), plus the three determinant routes."""
    hessian = hessian or hs.hessian_analytic
    worst_on = worst_off = worst_det = 0.0
    for c in configs:
        _, q = hs.stationary_reduced(c)
        fd, _ = hs.fd_hessian(q, c)
        worst_on = max(worst_on, hs.max_relative_error(fd, hessian(q, c)))
        qq = _perturbed(q, rng)
        fd, _ = hs.fd_hessian(qq, c)
        worst_off = max(worst_off, hs.max_relative_error(fd, hessian(qq, c, off_shell=True)))
        worst_det = max(worst_det, _det_spread(c))
    ok = bool(configs) and worst_on <= fd_tol and worst_off <= fd_tol and worst_det <= det_tol
    return SuiteResult(
        "hessian",
        ok,
        f"{len(configs)} stationary + {len(configs)} perturbed points, FD rel err {worst_on:.3e} / "
        f"{worst_off:.3e}, determinant spread {worst_det:.3e}",
    )


def prefactor_series(base=(10, 10, 10), lambdas=(1, 2, 4, 8), convention=Convention.HALF_SHIFT):
    return [
        prefactor_check(JmConfig.parse(tuple(lam * x for x in base), (0, 0, 0)), convention)
        for lam in lambdas
    ]


def suite_prefactor(tol: float = PREFACTOR_TOL) -> SuiteResult:
    series = prefactor_series()
    dev = [abs(x - 1) for x in series]
    monotone = all(a > b for a, b in zip(dev, dev[1:]))
    ok = dev[0] <= tol and monotone
    shown = ", ".join(f"{x:.6f}" for x in series)
    return SuiteResult("prefactor", ok, f"j = lambda (10,10,10), lambda = 1,2,4,8: {shown}")


def suite_torus(configs: list[JmConfig], rng: random.Random) -> SuiteResult:
    worst_res = worst_area = 0.0
    for c in configs:
        st = stationary_point(c.jf, c.mf, Branch.P)
        v = st.vectors
        area = projected_area_delta_z(v[0], v[1])
        phases = np.exp(1j * np.array([rng.uniform(0, 2 * math.pi) for _ in range(3)]))
        rot = z_rotation(rng.uniform(0, 4 * math.pi))
        z = (st.spinors * phases[:, None]) @ rot.T
        worst_res = max(worst_res, stationarity_residual(z, c.jf, c.mf))
        w = hopf_vectors(z)
        worst_area = max(worst_area, abs(abs(projected_area_delta_z(w[0], w[1])) - abs(area)) / abs(area))
    ok = bool(configs) and worst_res <= STATIONARITY_TOL and worst_area <= TORUS_AREA_TOL
    return SuiteResult(
        "torus",
        ok,
        f"{len(configs)} gauge transforms, max residual {worst_res:.3e}, max relative area change {worst_area:.3e}",
    )


def run_all(level: str = "fast", seed: int = 0, hessian: Callable = None) -> list[SuiteResult]:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    p = LEVELS[level]
    rng = random.Random(seed)
    configs = random_configs(rng, p["n_configs"])
    hess_configs = random_configs(rng, p["n_hessian"], max_twice_j=120)
    return [
        suite_oracle(p["oracle_max"]),
        suite_stationarity(configs),
        suite_phase(configs),
        suite_hessian(hess_configs, rng, hessian=hessian),
        suite_prefactor(),
        suite_torus(configs[: p["n_torus"]], rng),
    ]


def format_report(results: list[SuiteResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}" for r in results]
    overall = all(r.passed for r in results)
    lines.append(f"{'overall':<{width}}  {'PASS' if overall else 'FAIL'}")
    return "\n".join(lines) + "\n"
