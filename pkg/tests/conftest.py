import math

import pytest

from fairpart.cli import random_convex_polygon
from fairpart.geom import Polygon

SQRT3 = math.sqrt(3.0)

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def equilateral():
    return Polygon([(0.0, 0.0), (2.0, 0.0), (1.0, SQRT3)])


def unit_square():
    return Polygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


def narrow_isosceles(apex_deg=20.0, height=1.0):
    half = height * math.tan(math.radians(apex_deg) / 2)
    return Polygon([(-half, 0.0), (half, 0.0), (0.0, height)])


def rectangle(w=2.0, h=1.0):
    return Polygon([(0.0, 0.0), (w, 0.0), (w, h), (0.0, h)])


def random_polygons(count, seed=2024, lo=3, hi=12):
    return [random_convex_polygon([seed, i], lo + i % (hi - lo + 1)) for i in range(count)]


@pytest.fixture
def tri():
    return equilateral()


@pytest.fixture
def square():
    return unit_square()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
