from fractions import Fraction

import pytest
from hypothesis import settings

from mcsum.algebra import Poly, RatFunc

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def poly_from_roots_squared(*coeffs):
    p = Poly([Fraction(c) for c in coeffs])
    return p * p


@pytest.fixture
def quartic_v():
    # (12x^4 - 1) / (4x^4 + 1)^2
    return RatFunc(Poly([-1, 0, 0, 0, 12]), poly_from_roots_squared(1, 0, 0, 0, 4))


@pytest.fixture
def sixth_power_v():
    num = Poly([1, 0, 0, 0, -480, 0, 0, 0, 8736, 0, 0, 0, -21504, 0, 0, 0, 5376])
    return RatFunc(num, Poly([1, 0, 0, 0, 4]) ** 6)


@pytest.fixture
def mathieu_v():
    # 2x / (x^2 + 1)^2, the Mathieu term at r = 1
    return RatFunc(Poly([0, 2]), Poly([1, 0, 1]) ** 2)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
