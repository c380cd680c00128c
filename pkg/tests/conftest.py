from fractions import Fraction

import pytest

from bargmann3j.halfint import JmConfig

# (j, m, sign, radicand) from an independent table of 3j-symbols
REFERENCE_3J = [
    (("1", "1", "0"), ("0", "0", "0"), -1, Fraction(1, 3)),
    (("2", "2", "2"), ("0", "0", "0"), -1, Fraction(2, 35)),
    (("1/2", "1/2", "0"), ("1/2", "-1/2", "0"), 1, Fraction(1, 2)),
    (("1", "1", "1"), ("1", "-1", "0"), 1, Fraction(1, 6)),
    (("3/2", "1", "1/2"), ("-3/2", "1", "1/2"), 1, Fraction(1, 4)),
    (("3", "2", "1"), ("0", "0", "0"), -1, Fraction(3, 35)),
    (("4", "3", "2"), ("1", "-2", "1"), -1, Fraction(7, 180)),
    (("5/2", "3/2", "2"), ("1/2", "-3/2", "1"), 1, Fraction(9, 140)),
    (("6", "6", "6"), ("2", "-4", "2"), -1, Fraction(504, 46189)),
    (("9/2", "7/2", "3"), ("-5/2", "3/2", "1"), 1, Fraction(4, 165)),
    (("5", "5", "5"), ("0", "0", "0"), 0, Fraction(0)),
    (("3", "3", "3"), ("1", "1", "-2"), 0, Fraction(0)),
]


def cfg(j, m):
    return JmConfig.parse(j, m)


@pytest.fixture
def equilateral():
    return cfg((2, 2, 2), (0, 0, 0))


ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, title: str, passed: bool, detail: str) -> None:
    line = f"criterion {criterion} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
