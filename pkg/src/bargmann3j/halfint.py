"""Exact half-integer quantum numbers, selection rules and signed square roots.

Every angular momentum label is stored doubled (``twice = 2j``) so that all
bookkeeping stays in the integers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterator, Sequence, Union

__all__ = [
    "HalfInt",
    "halfint_from_twice",
    "parse_halfint",
    "SignedSqrtRational",
    "ssr_reduce",
    "JmConfig",
    "SelectionOutcome",
    "triangle_satisfied",
    "selection_rules",
    "iter_configs",
]


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """A number of the form n/2 with n an arbitrary integer."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise TypeError(f"HalfInt needs an int, got {self.twice!r}")

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def to_int(self) -> int:
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __float__(self) -> float:
        return self.twice / 2

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return HalfInt(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return HalfInt(self.twice - other.twice)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return HalfInt(other.twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.twice == other.twice

    def __lt__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.twice < other.twice

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def _coerce(x) -> HalfInt | None:
    if isinstance(x, HalfInt):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return HalfInt(2 * x)
    if isinstance(x, Fraction) and (2 * x).denominator == 1:
        return HalfInt(int(2 * x))
    return None


def halfint_from_twice(n: int) -> HalfInt:
    return HalfInt(int(n))


def parse_halfint(text: Union[str, int, float, Fraction, HalfInt]) -> HalfInt:
    """Parse ``"3/2"``, ``"1.5"``, ``"-2"`` (or a number) into a HalfInt.

    Raises ValueError for anything that is not an exact multiple of 1/2.
    """
    if isinstance(text, HalfInt):
        return text
    if isinstance(text, str):
        s = text.strip()
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse {text!r} as a half-integer") from None
    elif isinstance(text, float):
        if not math.isfinite(text):
            raise ValueError(f"cannot parse {text!r} as a half-integer")
        value = Fraction(text)
    else:
        value = Fraction(text)
    twice = 2 * value
    if twice.denominator != 1:
        raise ValueError(f"{text!r} is not a multiple of 1/2")
    return HalfInt(int(twice))


@dataclass(frozen=True)
class SignedSqrtRational:
    """``sign * sqrt(radicand)`` with a non-negative rational radicand.

    Construct through :func:`ssr_reduce` (or ``SignedSqrtRational.make``) to get
    the canonical form; equality is structural and therefore only meaningful
    between canonical values.
    """

    sign: int
    radicand: Fraction

    @classmethod
    def make(cls, sign: int, radicand) -> "SignedSqrtRational":
        return ssr_reduce(cls(sign, Fraction(radicand)))

    @classmethod
    def zero(cls) -> "SignedSqrtRational":
        return cls(0, Fraction(0))

    @classmethod
    def from_signed_square(cls, signed_square: Fraction) -> "SignedSqrtRational":
        """Build from ``sign(v) * v**2``."""
        q = Fraction(signed_square)
        return cls.make((q > 0) - (q < 0), abs(q))

    def is_zero(self) -> bool:
        return self.sign == 0

    def square(self) -> Fraction:
        return self.radicand

    def signed_square(self) -> Fraction:
        return self.sign * self.radicand

    def __neg__(self):
        return SignedSqrtRational(-self.sign, self.radicand)

    def __mul__(self, other):
        if isinstance(other, SignedSqrtRational):
            return SignedSqrtRational.make(self.sign * other.sign, self.radicand * other.radicand)
        if isinstance(other, int) and not isinstance(other, bool):
            s = (other > 0) - (other < 0)
            return SignedSqrtRational.make(self.sign * s, self.radicand * other * other)
        return NotImplemented

    __rmul__ = __mul__

    def __float__(self) -> float:
        return self.to_float()

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        num, den = self.radicand.numerator, self.radicand.denominator
        try:
            return self.sign * math.sqrt(num / den)
        except OverflowError:
            # num/den too large for a double even though the ratio is fine
            log = 0.5 * (_log_int(num) - _log_int(den))
            return self.sign * math.exp(log)

    def __str__(self):
        if self.sign == 0:
            return "0"
        prefix = "-" if self.sign < 0 else ""
        r = self.radicand
        num, den = math.isqrt(r.numerator), math.isqrt(r.denominator)
        if num * num == r.numerator and den * den == r.denominator:
            return f"{prefix}{Fraction(num, den)}"
        if r.denominator == 1:
            return f"{prefix}sqrt({r.numerator})"
        return f"{prefix}sqrt({r.numerator}/{r.denominator})"


def _log_int(n: int) -> float:
    bits = n.bit_length()
    if bits < 1000:
        return math.log(n)
    shift = bits - 53
    return math.log(n >> shift) + shift * math.log(2)


def ssr_reduce(v: SignedSqrtRational) -> SignedSqrtRational:
    """Return the canonical form: radicand in lowest terms, sign 0 iff radicand 0."""
    r = Fraction(v.radicand)
    if r < 0:
        raise ValueError("radicand must be non-negative")
    if r == 0 or v.sign == 0:
        return SignedSqrtRational(0, Fraction(0))
    if v.sign not in (-1, 1):
        raise ValueError(f"sign must be -1, 0 or +1, got {v.sign}")
    return SignedSqrtRational(v.sign, r)


class SelectionOutcome(enum.Enum):
    VALID = "Valid"
    NON_INTEGER_JM = "NonIntegerJm"
    M_OUT_OF_RANGE = "MOutOfRange"
    M_SUM_NONZERO = "MSumNonzero"
    TRIANGLE_VIOLATED = "TriangleViolated"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class JmConfig:
    """Arguments (j1 j2 j3; m1 m2 m3) of a 3j-symbol."""

    j: tuple[HalfInt, HalfInt, HalfInt]
    m: tuple[HalfInt, HalfInt, HalfInt]

    def __post_init__(self):
        j = tuple(parse_halfint(x) for x in self.j)
        m = tuple(parse_halfint(x) for x in self.m)
        if len(j) != 3 or len(m) != 3:
            raise ValueError("a 3j configuration needs three j and three m values")
        if any(x.twice < 0 for x in j):
            raise ValueError("j values must be non-negative")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "m", m)

    @classmethod
    def from_twice(cls, tj: Sequence[int], tm: Sequence[int]) -> "JmConfig":
        return cls(tuple(HalfInt(int(x)) for x in tj), tuple(HalfInt(int(x)) for x in tm))

    @classmethod
    def parse(cls, j: Sequence, m: Sequence) -> "JmConfig":
        return cls(tuple(parse_halfint(x) for x in j), tuple(parse_halfint(x) for x in m))

    @property
    def twice_j(self) -> tuple[int, int, int]:
        return tuple(x.twice for x in self.j)

    @property
    def twice_m(self) -> tuple[int, int, int]:
        return tuple(x.twice for x in self.m)

    @property
    def jf(self) -> tuple[float, float, float]:
        return tuple(float(x) for x in self.j)

    @property
    def mf(self) -> tuple[float, float, float]:
        return tuple(float(x) for x in self.m)

    def k_values(self) -> tuple[int, int, int]:
        """Determinant exponents (j2+j3-j1, j3+j1-j2, j1+j2-j3).

        Only meaningful (non-negative integers) when the triangle rule holds.
        """
        a, b, c = self.twice_j
        return ((b + c - a) // 2, (c + a - b) // 2, (a + b - c) // 2)

    def permuted(self, perm: Sequence[int]) -> "JmConfig":
        """Columns reordered so that column r of the result is column perm[r]."""
        return JmConfig(tuple(self.j[p] for p in perm), tuple(self.m[p] for p in perm))

    def negated_m(self) -> "JmConfig":
        return JmConfig(self.j, tuple(-x for x in self.m))

    def scaled(self, factor: Fraction) -> "JmConfig":
        factor = Fraction(factor)
        tj = [factor * x for x in self.twice_j]
        tm = [factor * x for x in self.twice_m]
        if any(x.denominator != 1 for x in tj + tm):
            raise ValueError(f"scaling by {factor} leaves the half-integer lattice")
        return JmConfig.from_twice([int(x) for x in tj], [int(x) for x in tm])

    def __str__(self):
        js = " ".join(str(x) for x in self.j)
        ms = " ".join(str(x) for x in self.m)
        return f"({js}; {ms})"


def triangle_satisfied(j1: HalfInt, j2: HalfInt, j3: HalfInt) -> bool:
    a, b, c = (parse_halfint(x).twice for x in (j1, j2, j3))
    if (a + b + c) % 2:
        return False
    return abs(a - b) <= c <= a + b


def selection_rules(c: JmConfig) -> SelectionOutcome:
    """First violated rule, checked in a fixed order, or VALID."""
    tj, tm = c.twice_j, c.twice_m
    if any((a - b) % 2 for a, b in zip(tj, tm)):
        return SelectionOutcome.NON_INTEGER_JM
    if any(abs(b) > a for a, b in zip(tj, tm)):
        return SelectionOutcome.M_OUT_OF_RANGE
    if sum(tm) != 0:
        return SelectionOutcome.M_SUM_NONZERO
    if not triangle_satisfied(*c.j):
        return SelectionOutcome.TRIANGLE_VIOLATED
    return SelectionOutcome.VALID


def iter_configs(max_twice_j: int, *, valid_only: bool = True) -> Iterator[JmConfig]:
    """All configurations with 2j_r <= max_twice_j, m3 fixed by the m-sum rule."""
    for a in range(max_twice_j + 1):
        for b in range(max_twice_j + 1):
            for cc in range(max_twice_j + 1):
                if valid_only and not triangle_satisfied(HalfInt(a), HalfInt(b), HalfInt(cc)):
                    continue
                for m1 in range(-a, a + 1, 2):
                    for m2 in range(-b, b + 1, 2):
                        m3 = -m1 - m2
                        if valid_only and (abs(m3) > cc or (cc - m3) % 2):
                            continue
                        yield JmConfig.from_twice((a, b, cc), (m1, m2, m3))
