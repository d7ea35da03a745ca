import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import SQRT3, equilateral, random_polygons, unit_square
from fairpart.cli import random_convex_polygon
from fairpart.geom import (
    Chord,
    GeometryError,
    NonConvexError,
    Polygon,
    antipodal,
    boundary_point,
    cut_by_chord,
    is_convex,
    overlap_area,
    polygon_from_json,
    polygon_to_json,
    regular_polygon,
    validate_partition,
)

seeds = st.integers(min_value=0, max_value=10_000)
vertex_counts = st.integers(min_value=3, max_value=12)


def arc_has_vertex(P, s, span, margin=1e-9):
    return any(margin < (c - s) % P.perimeter < span - margin for c in P.cum[:-1])


def fan_area(xs, ys):
    # independent of the shoelace sum: triangles from vertex 0
    out = []
    for k in range(1, len(xs) - 1):
        ux, uy = xs[k] - xs[0], ys[k] - ys[0]
        vx, vy = xs[k + 1] - xs[0], ys[k + 1] - ys[0]
        out.append(0.5 * abs(ux * vy - uy * vx))
    return math.fsum(out)


def test_square_measures(square):
    assert square.area == 1.0
    assert square.perimeter == 4.0
    assert square.centroid == pytest.approx((0.5, 0.5))
    assert square.scale == pytest.approx(math.sqrt(2))


def test_clockwise_input_is_reordered():
    p = Polygon([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert p.area == pytest.approx(1.0)
    assert (p.xs[0], p.ys[0]) == (0.0, 0.0)
    assert (p.xs[1], p.ys[1]) == (1.0, 0.0)


def test_collinear_and_repeated_vertices_are_dropped():
    p = Polygon([(0, 0), (0.5, 0), (1, 0), (1, 0), (1, 1), (0, 1)])
    assert len(p) == 4


def test_rejects_bad_input():
    with pytest.raises(NonConvexError):
        Polygon([(0, 0), (1, 0), (0.2, 0.2), (0, 1)])
    with pytest.raises(GeometryError):
        Polygon([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(GeometryError):
        Polygon([(0, 0), (1, 0)])
    with pytest.raises(GeometryError):
        Polygon([(0, 0), (1, 0), (float("nan"), 1)])
    # a pentagram has only left turns but winds twice
    star = [(math.cos(4 * math.pi * k / 5), math.sin(4 * math.pi * k / 5)) for k in range(5)]
    with pytest.raises(NonConvexError):
        Polygon(star)


def test_boundary_points_and_antipode(square):
    pt, k = boundary_point(square, 1.5)
    assert np.allclose(pt, [1.0, 0.5]) and k == 1
    pt, k = boundary_point(square, 4.25)
    assert np.allclose(pt, [0.25, 0.0]) and k == 0
    assert antipodal(square, 0.5) == pytest.approx(2.5)
    assert antipodal(square, 3.5) == pytest.approx(1.5)


def test_cut_keeps_ccw_arc_on_the_left(square):
    left, right = cut_by_chord(square, Chord.on(square, 0.5, 2.5))
    assert left.area == pytest.approx(0.5)
    # left piece holds the arc through (1, 0) and (1, 1)
    assert (1.0, 0.0) in zip(left.xs, left.ys)
    assert (0.0, 1.0) in zip(right.xs, right.ys)
    assert (left.xs[0], left.ys[0]) == pytest.approx((0.5, 0.0))


def test_cut_through_vertices(tri):
    # the median from vertex 0 to the midpoint of the opposite side
    L = tri.perimeter
    left, right = cut_by_chord(tri, Chord.on(tri, 0.0, L / 2))
    assert len(left) == 3 and len(right) == 3
    assert left.area == pytest.approx(right.area, rel=1e-14)


def test_degenerate_chords_raise(square):
    with pytest.raises(GeometryError):
        cut_by_chord(square, Chord.on(square, 1.0, 1.0))
    with pytest.raises(GeometryError):
        cut_by_chord(square, Chord.on(square, 0.0, 1.0))


@settings(max_examples=60, deadline=None)
@given(seeds, vertex_counts, st.floats(0, 1), st.floats(0.05, 0.95))
def test_cut_conserves_area_and_perimeter(seed, n, u, v):
    P = random_convex_polygon(seed, n)
    L = P.perimeter
    s0 = u * L
    ch = Chord.on(P, s0, s0 + v * L)
    # each side needs a vertex strictly inside its arc, else the chord runs along an edge
    assume(arc_has_vertex(P, s0, v * L) and arc_has_vertex(P, s0 + v * L, (1 - v) * L))
    left, right = cut_by_chord(P, ch)
    assert left.area + right.area == pytest.approx(P.area, rel=1e-12)
    assert left.perimeter + right.perimeter == pytest.approx(L + 2 * ch.length, rel=1e-12)
    assert is_convex(left) and is_convex(right)
    assert overlap_area(left, right) <= 1e-12 * P.area


@settings(max_examples=60, deadline=None)
@given(seeds, vertex_counts)
def test_shoelace_matches_fan_triangulation(seed, n):
    P = random_convex_polygon(seed, n)
    assert P.area == pytest.approx(fan_area(P.xs, P.ys), rel=1e-13)


def test_centroid_of_triangle(tri):
    assert tri.centroid == pytest.approx((1.0, SQRT3 / 3))


def test_central_symmetry_detection():
    assert unit_square().is_centrally_symmetric()
    assert regular_polygon(6).is_centrally_symmetric()
    assert not regular_polygon(5).is_centrally_symmetric()
    assert not Polygon([(0, 0), (2, 0), (2, 1), (0, 2)]).is_centrally_symmetric()


def test_validate_partition_flags_problems(square):
    halves = cut_by_chord(square, Chord.on(square, 0.5, 2.5))
    rep = validate_partition(square, list(halves))
    assert rep.ok() and rep.tiles_parent and rep.all_convex
    assert rep.area_spread == 0.0
    # the same half twice covers the area sum of the parent but overlaps itself
    dup = validate_partition(square, [halves[0], halves[0]])
    assert not dup.tiles_parent and not dup.ok()
    # unequal halves tile but are not fair
    uneven = validate_partition(square, list(cut_by_chord(square, Chord.on(square, 0.25, 2.5))))
    assert uneven.tiles_parent and uneven.area_spread > 0.1 and not uneven.ok()
    with pytest.raises(ValueError):
        validate_partition(square, [])


def test_json_round_trip():
    P = random_polygons(1)[0]
    Q = polygon_from_json(json.dumps(polygon_to_json(P)))
    assert Q.xs == P.xs and Q.ys == P.ys
    R = polygon_from_json([[0, 0], [1, 0], [0, 1]])
    assert R.area == 0.5
    with pytest.raises(GeometryError):
        polygon_from_json({"points": []})


@settings(max_examples=40, deadline=None)
@given(seeds, vertex_counts)
def test_random_polygon_generator(seed, n):
    P = random_convex_polygon(seed, n)
    assert len(P) == n
    assert P.scale == pytest.approx(1.0, rel=1e-12)
    assert is_convex(P)
    Q = random_convex_polygon(seed, n)
    assert P.xs == Q.xs and P.ys == Q.ys


def test_regular_polygon():
    P = regular_polygon(6, radius=2.0)
    assert len(P) == 6
    assert P.perimeter == pytest.approx(12.0)
    assert equilateral().area == pytest.approx(SQRT3)
