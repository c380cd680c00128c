import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bargmann3j.exact import (
    InvalidConfig,
    MonomialExponents,
    bargmann_moment_3j,
    delta_power_coefficient,
    monomial_exponents,
    normalization_N,
    racah_3j,
    racah_3j_naive,
)
from bargmann3j.halfint import JmConfig, SelectionOutcome, SignedSqrtRational, iter_configs

from conftest import REFERENCE_3J, cfg


@pytest.mark.parametrize("j, m, sign, radicand", REFERENCE_3J)
def test_reference_values(j, m, sign, radicand):
    expected = SignedSqrtRational.make(sign, radicand)
    c = cfg(j, m)
    assert racah_3j(c).value == expected
    assert racah_3j_naive(c).value == expected
    assert bargmann_moment_3j(c).value == expected


def test_display_strings():
    assert str(racah_3j(cfg((1, 1, 0), (0, 0, 0)))) == "-sqrt(1/3)"
    assert str(racah_3j(cfg((0, 0, 0), (0, 0, 0)))) == "1"
    assert str(racah_3j(cfg((1, 1, 3), (0, 0, 0)))) == "0 (TriangleViolated)"
    assert float(racah_3j(cfg((2, 2, 2), (0, 0, 0)))) == pytest.approx(-2 / math.sqrt(70))


def test_zero_reasons():
    assert racah_3j(cfg((1, 1, 0), (1, 0, 0))).zero_reason is SelectionOutcome.M_SUM_NONZERO
    assert bargmann_moment_3j(cfg((1, 1, 0), (2, -2, 0))).zero_reason is SelectionOutcome.M_OUT_OF_RANGE
    # an accidental zero carries no selection-rule reason
    v = racah_3j(cfg((5, 5, 5), (0, 0, 0)))
    assert v.value.is_zero() and v.zero_reason is None


def test_delta_power_coefficient_small():
    # d1 d2 d3 contains no monomial with every exponent equal to one
    assert delta_power_coefficient((1, 1, 1), MonomialExponents(((1, 1), (1, 1), (1, 1)))) == 0
    # d3 = z11 z22 - z21 z12
    assert delta_power_coefficient((0, 0, 1), MonomialExponents(((1, 0), (0, 1), (0, 0)))) == 1
    assert delta_power_coefficient((0, 0, 1), MonomialExponents(((0, 1), (1, 0), (0, 0)))) == -1
    assert delta_power_coefficient((0, 0, 1), MonomialExponents(((1, 1), (0, 0), (0, 0)))) == 0


def test_delta_power_coefficient_rejects_negative():
    with pytest.raises(ValueError):
        delta_power_coefficient((-1, 0, 0), MonomialExponents(((0, 0), (0, 0), (0, 0))))


def test_monomial_exponents():
    n = monomial_exponents(cfg(("3/2", 1, "1/2"), ("-3/2", 1, "1/2")))
    assert n.n == ((0, 3), (2, 0), (1, 0))
    assert n.degrees() == (3, 2, 1)


def test_normalization_N():
    n = normalization_N(cfg((1, 1, 0), (0, 0, 0)))
    assert n.sqrt_part == SignedSqrtRational.make(1, Fraction(1, 12))
    assert n.pi_power == -6
    assert n.value == pytest.approx(1 / (math.pi**6 * math.sqrt(12)))
    n = normalization_N(cfg((2, 2, 2), (0, 0, 0)))
    f = math.factorial
    assert n.value == pytest.approx(1 / (math.pi**6 * math.sqrt(f(2) ** 6 * f(7) * f(2) ** 3)))
    with pytest.raises(InvalidConfig):
        normalization_N(cfg((1, 1, 3), (0, 0, 0)))


EXHAUSTIVE = list(iter_configs(8))


def _phase(x: int) -> int:
    return -1 if x % 2 else 1


def test_symmetries_exhaustive():
    for c in EXHAUSTIVE:
        v = racah_3j(c).value
        odd = _phase(sum(c.twice_j) // 2)
        for perm in ((1, 2, 0), (2, 0, 1)):
            assert racah_3j(c.permuted(perm)).value == v
        for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0)):
            assert racah_3j(c.permuted(perm)).value == v * odd
        assert racah_3j(c.negated_m()).value == v * odd


def test_orthogonality_exhaustive():
    # sum over m1, m2 of (2 j3 + 1) (j1 j2 j3; m1 m2 m3)^2 = 1 for each (j3, m3)
    buckets = {}
    for c in EXHAUSTIVE:
        key = (c.twice_j, c.twice_m[2])
        buckets[key] = buckets.get(key, Fraction(0)) + racah_3j(c).value.square()
    for (tj, _), total in buckets.items():
        assert total * (tj[2] + 1) == 1


def test_bargmann_matches_racah_up_to_8():
    for c in EXHAUSTIVE:
        assert bargmann_moment_3j(c).value == racah_3j(c).value


@st.composite
def configs(draw, max_twice=40):
    a = draw(st.integers(0, max_twice))
    b = draw(st.integers(0, max_twice))
    cc = draw(st.integers(abs(a - b), a + b).filter(lambda x: (a + b + x) % 2 == 0))
    m1 = draw(st.integers(-a, a).filter(lambda x: (a - x) % 2 == 0))
    m2 = draw(st.integers(-b, b).filter(lambda x: (b - x) % 2 == 0))
    return JmConfig.from_twice((a, b, cc), (m1, m2, -m1 - m2))


@settings(max_examples=150, deadline=None)
@given(configs())
def test_bargmann_matches_racah_property(c):
    assert bargmann_moment_3j(c).value == racah_3j(c).value


@settings(max_examples=100, deadline=None)
@given(configs())
def test_bounded_by_one(c):
    assert racah_3j(c).value.square() <= 1
