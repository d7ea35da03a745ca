"""
Convex polygon primitives: construction, measure, arc-length boundary
parameterization, chord cuts and partition validation.

Vertices are kept as plain float tuples. The polygons handled here are small
(tens of vertices) and the solvers call these routines hundreds of thousands
of times, so the hot paths stay in scalar Python rather than numpy.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

EPS_GEOM = 1e-12
EPS_VERIFY = 1e-9


class GeometryError(ValueError):
    """Invalid or degenerate polygon input."""


class NonConvexError(GeometryError):
    """Raised for a polygon with a reflex vertex; ``index`` names that vertex."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"polygon is not convex: reflex vertex at index {index}")


def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _shoelace(xs, ys):
    n = len(xs)
    acc = 0.0
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        acc += xs[k] * ys[k1] - xs[k1] * ys[k]
    return 0.5 * acc


def _diameter(xs, ys):
    best = 0.0
    n = len(xs)
    for i in range(n):
        xi, yi = xs[i], ys[i]
        for j in range(i + 1, n):
            d = (xs[j] - xi) ** 2 + (ys[j] - yi) ** 2
            if d > best:
                best = d
    return math.sqrt(best)


class Polygon:
    """Convex polygon stored as a counterclockwise vertex loop.

    The public constructor accepts any vertex order, drops repeated points,
    merges collinear vertices and rejects non-convex input. Vertex 0 of the
    input stays vertex 0 whenever it survives the clean-up, since the boundary
    parameter ``s`` is measured from it.
    """

    __slots__ = ("xs", "ys", "area", "perimeter", "cum", "lengths", "_scale")

    def __init__(self, vertices):
        pts = [(float(x), float(y)) for x, y in vertices]
        if len(pts) < 3:
            raise GeometryError("a polygon needs at least 3 vertices")
        if not all(math.isfinite(c) for p in pts for c in p):
            raise GeometryError("vertex coordinates must be finite")
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        scale = _diameter(xs, ys)
        if scale == 0.0:
            raise GeometryError("all vertices coincide")
        tol = EPS_GEOM * scale

        # original indices travel with the points so diagnostics can name them
        idx = list(range(len(pts)))
        if _shoelace(xs, ys) < 0.0:
            idx = [0] + idx[:0:-1]
        loop = []
        for k in idx:
            if loop and math.hypot(pts[k][0] - pts[loop[-1]][0], pts[k][1] - pts[loop[-1]][1]) <= tol:
                continue
            loop.append(k)
        while len(loop) > 1 and math.hypot(pts[loop[0]][0] - pts[loop[-1]][0],
                                           pts[loop[0]][1] - pts[loop[-1]][1]) <= tol:
            loop.pop()
        if len(loop) < 3:
            raise GeometryError("polygon has fewer than 3 distinct vertices")

        area_tol = EPS_GEOM * scale * scale
        n = len(loop)
        keep = []
        for m in range(n):
            a, b, c = pts[loop[m - 1]], pts[loop[m]], pts[loop[(m + 1) % n]]
            cr = _cross(a[0], a[1], b[0], b[1], c[0], c[1])
            if cr < -area_tol:
                raise NonConvexError(loop[m])
            if cr > area_tol:
                keep.append(loop[m])
        if len(keep) < 3:
            raise GeometryError("degenerate polygon (zero area)")
        # a polygon whose edges wind around more than once is not convex either
        turning = 0.0
        n = len(keep)
        for m in range(n):
            a, b, c = pts[keep[m - 1]], pts[keep[m]], pts[keep[(m + 1) % n]]
            turning += math.atan2(_cross(a[0], a[1], b[0], b[1], c[0], c[1]),
                                  (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]))
        if abs(turning - 2.0 * math.pi) > 1e-3:
            raise NonConvexError(keep[0], "polygon boundary self-intersects (total turning != 2*pi)")
        self._init([pts[k][0] for k in keep], [pts[k][1] for k in keep])
        if self.area < area_tol:
            raise GeometryError("degenerate polygon (zero area)")

    @classmethod
    def _trusted(cls, xs, ys):
        """Build from a loop already known to be convex and counterclockwise."""
        self = object.__new__(cls)
        self._init(xs, ys)
        return self

    def _init(self, xs, ys):
        self.xs = xs
        self.ys = ys
        n = len(xs)
        lengths = [0.0] * n
        cum = [0.0] * (n + 1)
        acc = 0.0
        for k in range(n):
            k1 = k + 1 if k + 1 < n else 0
            lk = math.hypot(xs[k1] - xs[k], ys[k1] - ys[k])
            lengths[k] = lk
            acc += lk
            cum[k + 1] = acc
        self.lengths = lengths
        self.cum = cum
        self.perimeter = acc
        self.area = _shoelace(xs, ys)
        self._scale = None

    def __len__(self):
        return len(self.xs)

    def __repr__(self):
        return f"Polygon({self.vertices.tolist()!r})"

    @property
    def vertices(self):
        return np.column_stack([self.xs, self.ys])

    @property
    def scale(self):
        """Diameter of the polygon; every tolerance is taken relative to it."""
        if self._scale is None:
            self._scale = _diameter(self.xs, self.ys)
        return self._scale

    @property
    def centroid(self):
        xs, ys = self.xs, self.ys
        n = len(xs)
        cx = cy = 0.0
        for k in range(n):
            k1 = k + 1 if k + 1 < n else 0
            w = xs[k] * ys[k1] - xs[k1] * ys[k]
            cx += (xs[k] + xs[k1]) * w
            cy += (ys[k] + ys[k1]) * w
        return cx / (6.0 * self.area), cy / (6.0 * self.area)

    def reduce(self, s):
        """Reduce a boundary parameter into [0, L)."""
        L = self.perimeter
        s = math.fmod(s, L)
        if s < 0.0:
            s += L
        if s >= L:
            s = 0.0
        return s

    def edge_at(self, s):
        """Index of the edge containing reduced parameter ``s``."""
        k = bisect_right(self.cum, s) - 1
        n = len(self.xs)
        return n - 1 if k >= n else (0 if k < 0 else k)

    def point_at(self, s):
        """Boundary point at reduced parameter ``s`` with its edge index."""
        k = self.edge_at(s)
        lk = self.lengths[k]
        t = (s - self.cum[k]) / lk
        k1 = k + 1 if k + 1 < len(self.xs) else 0
        x = self.xs[k] + t * (self.xs[k1] - self.xs[k])
        y = self.ys[k] + t * (self.ys[k1] - self.ys[k])
        return (x, y), k

    def scaled(self, factor):
        return Polygon._trusted([factor * x for x in self.xs], [factor * y for y in self.ys])

    def is_centrally_symmetric(self, tol=1e-9):
        """True when the vertex set is invariant under reflection through the centroid."""
        n = len(self.xs)
        if n % 2:
            return False
        cx, cy = self.centroid
        h = n // 2
        lim = tol * self.scale
        for k in range(n):
            j = (k + h) % n
            if abs(self.xs[k] + self.xs[j] - 2 * cx) > lim or abs(self.ys[k] + self.ys[j] - 2 * cy) > lim:
                return False
        return True


def polygon_area(poly):
    if poly.area < EPS_GEOM * poly.scale ** 2:
        raise GeometryError("degenerate polygon (zero area)")
    return poly.area


def polygon_perimeter(poly):
    return poly.perimeter


def boundary_point(poly, s):
    """Point at arc length ``s`` (counterclockwise from vertex 0) and the edge holding it.

    At an exact vertex the edge starting there is returned.
    """
    (x, y), k = poly.point_at(poly.reduce(s))
    return np.array([x, y]), k


def antipodal(poly, s):
    return poly.reduce(s + 0.5 * poly.perimeter)


def _snapped_point(poly, s):
    """Boundary point at ``s``; within EPS_GEOM of a vertex it snaps onto the vertex."""
    tol = EPS_GEOM * poly.scale
    k = poly.edge_at(s)
    n = len(poly.xs)
    if s - poly.cum[k] <= tol:
        return (poly.xs[k], poly.ys[k]), k, True
    if poly.cum[k + 1] - s <= tol:
        k1 = k + 1 if k + 1 < n else 0
        return (poly.xs[k1], poly.ys[k1]), k1, True
    (x, y), k = poly.point_at(s)
    return (x, y), k, False


@dataclass(frozen=True)
class Chord:
    """Directed cut from P = P(s_start) to P' = P(s_end) on a polygon boundary."""

    s_start: float
    s_end: float
    start: tuple = field(compare=False)
    end: tuple = field(compare=False)

    @classmethod
    def on(cls, poly, s_start, s_end):
        s0, s1 = poly.reduce(s_start), poly.reduce(s_end)
        p0, _, _ = _snapped_point(poly, s0)
        p1, _, _ = _snapped_point(poly, s1)
        return cls(s0, s1, p0, p1)

    @property
    def length(self):
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])

    def reversed(self):
        return Chord(self.s_end, self.s_start, self.end, self.start)


def _arc_loop(poly, s0, s1):
    """Vertex loop of the piece bounded by the ccw arc s0 -> s1 and the chord back."""
    tol = EPS_GEOM * poly.scale
    L = poly.perimeter
    p0, k0, snapped0 = _snapped_point(poly, s0)
    p1, _, _ = _snapped_point(poly, s1)
    span = (s1 - s0) % L
    xs = [p0[0]]
    ys = [p0[1]]
    n = len(poly.xs)
    k = (k0 + 1) % n
    for _ in range(n):
        d = (poly.cum[k] - s0) % L
        if d >= span - tol:
            break
        if d > tol:
            xs.append(poly.xs[k])
            ys.append(poly.ys[k])
        k = (k + 1) % n
    if math.hypot(p1[0] - xs[-1], p1[1] - ys[-1]) > tol:
        xs.append(p1[0])
        ys.append(p1[1])
    return xs, ys


def cut_by_chord(poly, chord):
    """Split ``poly`` along ``chord``.

    The left piece holds the counterclockwise boundary arc from ``s_start``
    to ``s_end``; its vertex 0 is the chord start. The right piece holds the
    complementary arc and starts at the chord end.
    """
    if chord.length <= EPS_GEOM * poly.scale:
        raise GeometryError("degenerate chord: endpoints coincide")
    lx, ly = _arc_loop(poly, chord.s_start, chord.s_end)
    rx, ry = _arc_loop(poly, chord.s_end, chord.s_start)
    if len(lx) < 3 or len(rx) < 3:
        raise GeometryError("chord runs along the boundary; one side is empty")
    return Polygon._trusted(lx, ly), Polygon._trusted(rx, ry)


def is_convex(poly, tol=EPS_GEOM):
    """Convexity test with tolerance ``tol`` relative to the squared diameter.

    Accepts a Polygon or a raw vertex sequence (which may be non-convex).
    Collinear vertices count as convex.
    """
    if isinstance(poly, Polygon):
        xs, ys = poly.xs, poly.ys
    else:
        arr = np.asarray(poly, dtype=float)
        xs, ys = arr[:, 0].tolist(), arr[:, 1].tolist()
    n = len(xs)
    if n < 3:
        return False
    if _shoelace(xs, ys) < 0.0:
        xs, ys = xs[::-1], ys[::-1]
    lim = tol * _diameter(xs, ys) ** 2
    turning = 0.0
    for m in range(n):
        ax, ay = xs[m - 1], ys[m - 1]
        bx, by = xs[m], ys[m]
        cx, cy = xs[(m + 1) % n], ys[(m + 1) % n]
        cr = _cross(ax, ay, bx, by, cx, cy)
        if cr < -lim:
            return False
        turning += math.atan2(cr, (bx - ax) * (cx - bx) + (by - ay) * (cy - by))
    # the sum is a whole multiple of 2*pi; micro-edges add direction noise, so
    # compare loosely
    return abs(turning - 2.0 * math.pi) < 1e-3


def clip_convex(subject, clip):
    """Sutherland-Hodgman intersection of two convex ccw loops given as (xs, ys)."""
    sx, sy = list(subject[0]), list(subject[1])
    cx, cy = clip
    m = len(cx)
    for k in range(m):
        if not sx:
            break
        ax, ay = cx[k], cy[k]
        bx, by = cx[(k + 1) % m], cy[(k + 1) % m]
        ox, oy = [], []
        n = len(sx)
        for i in range(n):
            px, py = sx[i - 1], sy[i - 1]
            qx, qy = sx[i], sy[i]
            fp = _cross(ax, ay, bx, by, px, py)
            fq = _cross(ax, ay, bx, by, qx, qy)
            if fq >= 0.0:
                if fp < 0.0:
                    t = fp / (fp - fq)
                    ox.append(px + t * (qx - px))
                    oy.append(py + t * (qy - py))
                ox.append(qx)
                oy.append(qy)
            elif fp >= 0.0:
                t = fp / (fp - fq)
                ox.append(px + t * (qx - px))
                oy.append(py + t * (qy - py))
        sx, sy = ox, oy
    return sx, sy


def overlap_area(a, b):
    xs, ys = clip_convex((a.xs, a.ys), (b.xs, b.ys))
    if len(xs) < 3:
        return 0.0
    return max(_shoelace(xs, ys), 0.0)


@dataclass
class PartitionReport:
    piece_count: int
    areas: list
    perimeters: list
    area_spread: float
    perimeter_spread: float
    all_convex: bool
    tiles_parent: bool

    def ok(self, area_tol=EPS_VERIFY, perimeter_tol=EPS_VERIFY):
        return (self.all_convex and self.tiles_parent
                and self.area_spread <= area_tol and self.perimeter_spread <= perimeter_tol)

    def to_dict(self):
        return {
            "piece_count": self.piece_count,
            "areas": list(self.areas),
            "perimeters": list(self.perimeters),
            "area_spread": self.area_spread,
            "perimeter_spread": self.perimeter_spread,
            "all_convex": self.all_convex,
            "tiles_parent": self.tiles_parent,
        }


def _spread(values):
    mean = sum(values) / len(values)
    return (max(values) - min(values)) / mean if mean > 0 else math.inf


def validate_partition(parent, pieces, tol=EPS_VERIFY):
    """Measure a candidate partition of ``parent``; never raises on bad input.

    Tiling means: areas sum to the parent area, every piece lies inside the
    parent and no two pieces overlap, each up to ``tol * parent.area``.
    """
    if not pieces:
        raise ValueError("no pieces to validate")
    areas = [p.area for p in pieces]
    perims = [p.perimeter for p in pieces]
    slack = tol * parent.area
    tiles = abs(sum(areas) - parent.area) <= slack
    if tiles:
        for p in pieces:
            if p.area - overlap_area(p, parent) > slack:
                tiles = False
                break
    if tiles:
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                if overlap_area(pieces[i], pieces[j]) > slack:
                    tiles = False
                    break
            if not tiles:
                break
    return PartitionReport(
        piece_count=len(pieces),
        areas=areas,
        perimeters=perims,
        area_spread=_spread(areas),
        perimeter_spread=_spread(perims),
        all_convex=all(is_convex(p) for p in pieces),
        tiles_parent=tiles,
    )


def regular_polygon(n, radius=1.0, phase=0.0):
    ang = phase + 2.0 * np.pi * np.arange(n) / n
    return Polygon(np.column_stack([radius * np.cos(ang), radius * np.sin(ang)]))


def polygon_from_json(obj):
    """Parse ``{"vertices": [[x, y], ...]}`` or a bare list of pairs; clockwise input is reordered."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, list):
        obj = {"vertices": obj}
    try:
        verts = obj["vertices"]
    except (KeyError, TypeError):
        raise GeometryError('polygon JSON needs a "vertices" list') from None
    if not isinstance(verts, list) or not all(isinstance(v, (list, tuple)) and len(v) == 2 for v in verts):
        raise GeometryError('"vertices" must be a list of [x, y] pairs')
    return Polygon(verts)


def polygon_to_json(poly):
    return {"vertices": [[x, y] for x, y in zip(poly.xs, poly.ys)]}


def read_polygon(path):
    with open(path, encoding="utf-8") as fh:
        return polygon_from_json(json.load(fh))
