import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SQRT3, equilateral, narrow_isosceles, random_polygons, rectangle, unit_square
from fairpart.bisect import (
    alpha,
    alpha_profile,
    area_bisector_at,
    fair_bisectors,
    fair_ranges,
    range_chord,
)
from fairpart.cli import random_convex_polygon
from fairpart.geom import Polygon, cut_by_chord, regular_polygon

seeds = st.integers(min_value=0, max_value=10_000)
vertex_counts = st.integers(min_value=3, max_value=12)


def oracle_alpha(P, s):
    """Area left of P(s)P(s + L/2) minus area right of it, from scratch."""
    xs, ys = list(P.xs), list(P.ys)
    n = len(xs)
    L = sum(math.hypot(xs[(k + 1) % n] - xs[k], ys[(k + 1) % n] - ys[k]) for k in range(n))

    def point(t):
        t %= L
        for k in range(n):
            e = math.hypot(xs[(k + 1) % n] - xs[k], ys[(k + 1) % n] - ys[k])
            if t <= e:
                f = t / e
                return xs[k] + f * (xs[(k + 1) % n] - xs[k]), ys[k] + f * (ys[(k + 1) % n] - ys[k])
            t -= e
        return xs[0], ys[0]

    starts, acc = [], 0.0
    for k in range(n):
        starts.append(acc)
        acc += math.hypot(xs[(k + 1) % n] - xs[k], ys[(k + 1) % n] - ys[k])
    s %= L
    loop = [point(s)]
    for k in sorted(range(n), key=lambda k: (starts[k] - s) % L):
        if 0 < (starts[k] - s) % L < L / 2:
            loop.append((xs[k], ys[k]))
    loop.append(point(s + L / 2))
    area = 0.0
    for (x0, y0), (x1, y1) in zip(loop, loop[1:] + loop[:1]):
        area += x0 * y1 - x1 * y0
    left = 0.5 * area
    total = P.area
    return left - (total - left)


def test_hand_computed_alpha():
    # right triangle 4-3-5: L = 12, chord from (0, 0) to (2.4, 1.2) leaves area 2.4 on the left
    T = Polygon([(0, 0), (4, 0), (0, 3)])
    assert alpha(T, 0.0) == pytest.approx(-1.2, abs=1e-14)
    assert alpha_profile(T).value(0.0) == pytest.approx(-1.2, abs=1e-14)
    assert oracle_alpha(T, 0.0) == pytest.approx(-1.2, abs=1e-14)
    # antisymmetry: the reversed chord swaps the sides
    assert alpha_profile(T).value(6.0) == pytest.approx(1.2, abs=1e-14)


@pytest.mark.parametrize("P", [equilateral(), unit_square(), narrow_isosceles(), rectangle(3, 1)] + random_polygons(8, seed=11))
def test_profile_matches_both_direct_routes(P):
    prof = alpha_profile(P)
    L = P.perimeter
    for s in np.linspace(0, L, 97):
        want = oracle_alpha(P, s)
        assert prof.value(s) == pytest.approx(want, abs=1e-12 * P.scale ** 2)
        assert alpha(P, s) == pytest.approx(want, abs=1e-12 * P.scale ** 2)


@settings(max_examples=40, deadline=None)
@given(seeds, vertex_counts, st.floats(0, 1))
def test_alpha_is_antisymmetric(seed, n, u):
    P = random_convex_polygon(seed, n)
    prof = alpha_profile(P)
    s = u * P.perimeter
    assert prof.value(s + 0.5 * P.perimeter) == pytest.approx(-prof.value(s), abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(seeds, vertex_counts)
def test_proper_range_count_is_odd(seed, n):
    P = random_convex_polygon(seed, n)
    ranges = fair_ranges(P)
    assert sum(r.proper for r in ranges) % 2 == 1


@settings(max_examples=30, deadline=None)
@given(seeds, vertex_counts)
def test_fair_bisectors_are_fair(seed, n):
    P = random_convex_polygon(seed, n)
    for ch, p in fair_bisectors(P):
        left, right = cut_by_chord(P, ch)
        assert left.area == pytest.approx(right.area, rel=1e-10)
        assert left.perimeter == pytest.approx(right.perimeter, rel=1e-10)
        assert left.perimeter == pytest.approx(p, rel=1e-12)


def test_equilateral_medians():
    T = equilateral()
    ranges = fair_ranges(T)
    assert len(ranges) == 3 and all(r.proper and r.is_point for r in ranges)
    verts = [(0.0, 0.0), (2.0, 0.0), (1.0, SQRT3)]
    mids = [(1.5, SQRT3 / 2), (0.5, SQRT3 / 2), (1.0, 0.0)]
    medians = {frozenset([i, 3 + i]) for i in range(3)}
    pts = verts + mids
    found = set()
    for r in ranges:
        ch, _ = range_chord(T, r)
        ends = []
        for q in (ch.start, ch.end):
            d = [math.hypot(q[0] - x, q[1] - y) for x, y in pts]
            k = int(np.argmin(d))
            assert d[k] <= 1e-9 * T.scale
            ends.append(k)
        found.add(frozenset(ends))
    assert found == medians


@pytest.mark.parametrize("apex", [10.0, 20.0, 29.0])
def test_narrow_isosceles_has_only_the_apex_bisector(apex):
    T = narrow_isosceles(apex)
    ranges = fair_ranges(T)
    assert len(ranges) == 1 and ranges[0].proper
    ch, _ = range_chord(T, ranges[0])
    ends = sorted([ch.start, ch.end], key=lambda q: q[1])
    assert ends[0] == pytest.approx((0.0, 0.0), abs=1e-12)
    assert ends[1] == pytest.approx((0.0, 1.0), abs=1e-12)


def test_wide_isosceles_has_three():
    # apex 100 degrees: the two base-angle bisector directions also become fair
    T = narrow_isosceles(100.0)
    assert sum(r.proper for r in fair_ranges(T)) in (1, 3)


@pytest.mark.parametrize("P", [rectangle(2, 1), unit_square(), regular_polygon(6)])
def test_centrally_symmetric_whole_boundary(P):
    ranges = fair_ranges(P)
    assert len(ranges) == 1 and ranges[0].whole_boundary and ranges[0].proper
    assert np.max(np.abs(alpha_profile(P)(np.linspace(0, P.perimeter, 50)))) <= 1e-12


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_regular_odd_polygons(n):
    # one symmetry axis per vertex, each a fair bisector
    assert len(fair_ranges(regular_polygon(n))) == n


@settings(max_examples=40, deadline=None)
@given(seeds, vertex_counts, st.floats(0, 2 * math.pi))
def test_area_bisector_halves_and_points_along_theta(seed, n, theta):
    P = random_convex_polygon(seed, n)
    ch = area_bisector_at(P, theta)
    left, right = cut_by_chord(P, ch)
    assert left.area == pytest.approx(0.5 * P.area, rel=1e-12)
    dx, dy = ch.end[0] - ch.start[0], ch.end[1] - ch.start[1]
    # the chord is parallel to theta and the left piece lies on the left of that direction
    assert abs(dx * math.sin(theta) - dy * math.cos(theta)) <= 1e-12 * P.scale
    nx, ny = -math.sin(theta), math.cos(theta)
    lx, ly = left.centroid
    assert (lx - ch.start[0]) * nx + (ly - ch.start[1]) * ny > 0
