from fractions import Fraction

import mpmath
import pytest

ORACLE_BITS = 3000


def mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def encloses(ball, value, slack_bits: int = ORACLE_BITS - 64) -> bool:
    """ball contains ``value`` (an mpf from the high-precision oracle), up to
    the oracle's own rounding."""
    v = mpf_to_fraction(value) if not isinstance(value, (int, Fraction)) else Fraction(value)
    tol = (abs(v) + 1) * Fraction(1, 2 ** slack_bits)
    return ball.lower() - tol <= v <= ball.upper() + tol


@pytest.fixture
def hp():
    """mpmath at oracle precision for the duration of a test."""
    with mpmath.workprec(ORACLE_BITS):
        yield mpmath.mp


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
