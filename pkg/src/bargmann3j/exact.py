"""Exact 3j-symbols by two unrelated routes.

``racah_3j`` is the textbook single-sum formula.  ``bargmann_moment_3j`` takes
the overlap between the monomial state and the determinant-built invariant
state in the Bargmann (holomorphic) representation and does the 12-dimensional
Gaussian integral in closed form: monomials z^n / sqrt(n!) are orthonormal, so
the integral is a single coefficient of the polynomial d1^k1 d2^k2 d3^k3 times
factorials.  Both return canonical SignedSqrtRational values, so agreement is
checked with plain equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .halfint import JmConfig, SelectionOutcome, SignedSqrtRational, selection_rules

__all__ = [
    "ExactValue",
    "MonomialExponents",
    "racah_3j",
    "racah_3j_naive",
    "delta_power_coefficient",
    "monomial_exponents",
    "bargmann_moment_3j",
    "NormalizationConstant",
    "normalization_N",
    "InvalidConfig",
]


class InvalidConfig(ValueError):
    """Raised when a configuration violates the selection rules where it must not."""


@lru_cache(maxsize=4096)
def _fact(n: int) -> int:
    return math.factorial(n)


@dataclass(frozen=True)
class ExactValue:
    value: SignedSqrtRational
    zero_reason: Optional[SelectionOutcome] = None

    def __post_init__(self):
        if self.zero_reason is not None and not self.value.is_zero():
            raise ValueError("zero_reason given for a non-zero value")

    def __float__(self):
        return self.value.to_float()

    def __str__(self):
        if self.zero_reason is not None:
            return f"0 ({self.zero_reason})"
        return str(self.value)


@dataclass(frozen=True)
class MonomialExponents:
    """Exponents n[r][mu] of z_{r mu}, r = 0..2 (spins), mu = 0..1 (components)."""

    n: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        n = tuple(tuple(int(x) for x in pair) for pair in self.n)
        if len(n) != 3 or any(len(p) != 2 for p in n):
            raise ValueError("need three pairs of exponents")
        if any(x < 0 for p in n for x in p):
            raise ValueError("exponents must be non-negative")
        object.__setattr__(self, "n", n)

    def degrees(self) -> tuple[int, int, int]:
        return tuple(a + b for a, b in self.n)


def monomial_exponents(c: JmConfig) -> MonomialExponents:
    """Exponents (j_r + m_r, j_r - m_r) of the basis-state monomial."""
    return MonomialExponents(
        tuple(((tj + tm) // 2, (tj - tm) // 2) for tj, tm in zip(c.twice_j, c.twice_m))
    )


def _zero(reason: SelectionOutcome) -> ExactValue:
    return ExactValue(SignedSqrtRational.zero(), reason)


def _racah_pieces(c: JmConfig):
    tj, tm = c.twice_j, c.twice_m
    # every combination below is an integer once the selection rules hold
    a = (tj[0] + tj[1] - tj[2]) // 2
    b = (tj[0] - tj[1] + tj[2]) // 2
    cc = (-tj[0] + tj[1] + tj[2]) // 2
    big = (tj[0] + tj[1] + tj[2]) // 2 + 1
    jpm = [((x + y) // 2, (x - y) // 2) for x, y in zip(tj, tm)]
    pre = Fraction(_fact(a) * _fact(b) * _fact(cc), _fact(big))
    for p, q in jpm:
        pre *= _fact(p) * _fact(q)
    # arguments of the six factorials in the denominator of term t
    offs = (
        0,
        (tj[2] - tj[1] + tm[0]) // 2,
        (tj[2] - tj[0] - tm[1]) // 2,
        a,
        jpm[0][1],
        jpm[1][0],
    )
    sign_exp = (tj[0] - tj[1] - tm[2]) // 2
    return pre, offs, sign_exp


def _racah_term(t: int, offs) -> Optional[Fraction]:
    args = (t, offs[1] + t, offs[2] + t, offs[3] - t, offs[4] - t, offs[5] - t)
    if min(args) < 0:
        return None
    den = 1
    for x in args:
        den *= _fact(x)
    return Fraction(-1 if t % 2 else 1, den)


def racah_3j(c: JmConfig) -> ExactValue:
    outcome = selection_rules(c)
    if outcome is not SelectionOutcome.VALID:
        return _zero(outcome)
    pre, offs, sign_exp = _racah_pieces(c)
    tmin = max(0, -offs[1], -offs[2])
    tmax = min(offs[3], offs[4], offs[5])
    total = Fraction(0)
    for t in range(tmin, tmax + 1):
        total += _racah_term(t, offs)
    signed = -total if sign_exp % 2 else total
    return ExactValue(SignedSqrtRational.from_signed_square(signed * abs(signed) * pre))


def racah_3j_naive(c: JmConfig) -> ExactValue:
    """Racah sum over a deliberately generous t range, skipping invalid terms."""
    outcome = selection_rules(c)
    if outcome is not SelectionOutcome.VALID:
        return _zero(outcome)
    pre, offs, sign_exp = _racah_pieces(c)
    total = Fraction(0)
    for t in range(0, sum(c.twice_j) + 2):
        term = _racah_term(t, offs)
        if term is not None:
            total += term
    signed = -total if sign_exp % 2 else total
    return ExactValue(SignedSqrtRational.from_signed_square(signed * abs(signed) * pre))


def delta_power_coefficient(k: Sequence[int], target: MonomialExponents) -> int:
    """Coefficient of prod z_{r mu}^{n_{r mu}} in d1^k1 d2^k2 d3^k3.

    d1 = z21 z32 - z31 z22, d2 = z31 z12 - z11 z32, d3 = z11 z22 - z21 z12.
    With a_i the number of second-term factors taken from d_i^{k_i}, the
    exponents are linear in (a1, a2, a3); one free loop over a3 fixes the rest.
    """
    k1, k2, k3 = (int(x) for x in k)
    if min(k1, k2, k3) < 0:
        raise ValueError("determinant powers must be non-negative")
    (n11, n12), (n21, n22), (n31, n32) = target.n
    total = 0
    for a3 in range(k3 + 1):
        a2 = n11 - (k3 - a3)
        a1 = n22 - (k3 - a3)
        if not (0 <= a2 <= k2 and 0 <= a1 <= k1):
            continue
        if (
            n12 != (k2 - a2) + a3
            or n21 != (k1 - a1) + a3
            or n31 != a1 + (k2 - a2)
            or n32 != (k1 - a1) + a2
        ):
            continue
        sign = -1 if (a1 + a2 + a3) % 2 else 1
        total += sign * math.comb(k1, a1) * math.comb(k2, a2) * math.comb(k3, a3)
    return total


def bargmann_moment_3j(c: JmConfig) -> ExactValue:
    outcome = selection_rules(c)
    if outcome is not SelectionOutcome.VALID:
        return _zero(outcome)
    n = monomial_exponents(c)
    k = c.k_values()
    coef = delta_power_coefficient(k, n)
    if coef == 0:
        return ExactValue(SignedSqrtRational.zero())
    num = coef * coef
    for p, q in n.n:
        num *= _fact(p) * _fact(q)
    den = _fact(sum(c.twice_j) // 2 + 1) * _fact(k[0]) * _fact(k[1]) * _fact(k[2])
    return ExactValue(SignedSqrtRational.make(1 if coef > 0 else -1, Fraction(num, den)))


@dataclass(frozen=True)
class NormalizationConstant:
    """N = pi**-6 * sqrt_part, with the pi power kept symbolic."""

    sqrt_part: SignedSqrtRational
    pi_power: int
    log_value: float

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


def normalization_N(c: JmConfig) -> NormalizationConstant:
    """Constant in front of the 12-dimensional overlap integral.

    Product of the basis-state normalization, the invariant-state normalization
    1/sqrt((j1+j2+j3+1)! k1! k2! k3!), and pi**-6 from the Gaussian measure.
    """
    if selection_rules(c) is not SelectionOutcome.VALID:
        raise InvalidConfig(f"selection rules fail for {c}: {selection_rules(c)}")
    k = c.k_values()
    n = monomial_exponents(c)
    args = [p for pair in n.n for p in pair] + [sum(c.twice_j) // 2 + 1, *k]
    den = 1
    for x in args:
        den *= _fact(x)
    log_value = -6 * math.log(math.pi) - 0.5 * sum(math.lgamma(x + 1) for x in args)
    return NormalizationConstant(SignedSqrtRational.make(1, Fraction(1, den)), -6, log_value)
