"""
Fair bisectors of a convex polygon.

For a boundary parameter ``s`` let ``P = P(s)`` and ``P' = P(s + L/2)``. The
signed area difference ``alpha(s)`` between the two sides of the chord PP' is
piecewise quadratic in ``s`` with breakpoints wherever P or P' passes a
vertex, and antisymmetric under ``s -> s + L/2``. Its zeros are the fair
bisectors. Zero sets are grouped into fair ranges, each tagged proper when
alpha changes sign across it.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .geom import EPS_GEOM, Chord, cut_by_chord

EPS_ALPHA = 1e-10


@dataclass(frozen=True)
class AlphaProfile:
    """Exact piecewise-quadratic alpha over the half period [0, L/2).

    Segment ``k`` covers ``[s_lo[k], s_hi[k]]``; on it
    ``alpha(s) = a*u**2 + b*u + c`` with the local offset ``u = s - s_lo[k]``.
    ``edges[k]`` holds the edges carrying P and P'.
    """

    s_lo: tuple
    s_hi: tuple
    a: tuple
    b: tuple
    c: tuple
    edges: tuple
    period: float
    scale: float

    def __len__(self):
        return len(self.s_lo)

    def value(self, s):
        H = self.period
        s = math.fmod(s, 2.0 * H)
        if s < 0.0:
            s += 2.0 * H
        sign = 1.0
        if s >= H:
            s -= H
            sign = -1.0
        k = bisect_right(self.s_lo, s) - 1
        if k < 0:
            k = 0
        u = s - self.s_lo[k]
        return sign * ((self.a[k] * u + self.b[k]) * u + self.c[k])

    def __call__(self, s):
        if np.ndim(s) == 0:
            return self.value(float(s))
        return np.array([self.value(float(x)) for x in np.ravel(s)]).reshape(np.shape(s))

    def segments(self):
        for k in range(len(self.s_lo)):
            yield self.s_lo[k], self.s_hi[k], self.a[k], self.b[k], self.c[k]

    def to_json(self):
        return [
            {"s_lo": lo, "s_hi": hi, "a": a, "b": b, "c": c, "edges": list(e)}
            for (lo, hi, a, b, c), e in zip(self.segments(), self.edges)
        ]


@dataclass(frozen=True)
class FairRange:
    """Connected component of the zero set of alpha on the half period.

    ``s_lo`` lies in [0, L/2); ``s_hi`` may run past L/2 when the range wraps
    onto its antipodal copy.
    """

    s_lo: float
    s_hi: float
    proper: bool
    whole_boundary: bool = False
    s_rep: Optional[float] = None

    @property
    def is_point(self):
        return self.s_hi == self.s_lo

    def representative(self, period):
        """Parameter of the chord standing for this range.

        Plateaus use their midpoint; a cluster of nearly coincident roots
        uses its best root (``s_rep``); the whole boundary uses 0.
        """
        if self.whole_boundary:
            return 0.0
        s = 0.5 * (self.s_lo + self.s_hi) if self.s_rep is None else self.s_rep
        return s - period if s >= period else s

    def to_json(self):
        return {"s_lo": self.s_lo, "s_hi": self.s_hi, "proper": self.proper,
                "whole_boundary": self.whole_boundary}


def alpha(poly, s):
    """Direct evaluation: area left of chord P(s)P'(s) minus area right of it."""
    H = 0.5 * poly.perimeter
    left, right = cut_by_chord(poly, Chord.on(poly, s, s + H))
    return left.area - right.area


def _cr(ax, ay, bx, by):
    return ax * by - ay * bx


def alpha_profile(poly):
    n = len(poly.xs)
    # local frame keeps the cross products small
    ox, oy = poly.xs[0], poly.ys[0]
    xs = [x - ox for x in poly.xs]
    ys = [y - oy for y in poly.ys]
    cum = poly.cum
    L = poly.perimeter
    H = 0.5 * L
    A = poly.area
    tol = EPS_GEOM * poly.scale

    pre = [0.0] * (n + 1)
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        pre[k + 1] = pre[k] + _cr(xs[k], ys[k], xs[k1], ys[k1])
    ex = [0.0] * n
    ey = [0.0] * n
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        ex[k] = (xs[k1] - xs[k]) / poly.lengths[k]
        ey[k] = (ys[k1] - ys[k]) / poly.lengths[k]

    raw = [0.0, H]
    for k in range(1, n):
        raw.append(cum[k] if cum[k] < H else cum[k] - H)
    raw.sort()
    bps = [raw[0]]
    for v in raw[1:]:
        if v - bps[-1] > tol:
            bps.append(v)
    if H - bps[-1] <= tol:
        bps[-1] = H
    else:
        bps.append(H)

    s_lo, s_hi, ca, cb, cc, edges = [], [], [], [], [], []
    for lo, hi in zip(bps[:-1], bps[1:]):
        mid = 0.5 * (lo + hi)
        i = poly.edge_at(mid)
        mj = mid + H
        if mj >= L:
            mj -= L
        j = poly.edge_at(mj)
        sj = lo + H
        if sj >= L:
            sj -= L
        d1x, d1y = ex[i], ey[i]
        d2x, d2y = ex[j], ey[j]
        t0 = lo - cum[i]
        p0x, p0y = xs[i] + t0 * d1x, ys[i] + t0 * d1y
        t1 = sj - cum[j]
        q0x, q0y = xs[j] + t1 * d2x, ys[j] + t1 * d2y
        va = i + 1 if i + 1 < n else 0
        vx, vy = xs[va], ys[va]
        wx, wy = xs[j], ys[j]
        if va <= j:
            K = pre[j] - pre[va]
        else:
            K = pre[n] - pre[va] + pre[j]
        a2 = _cr(d2x, d2y, d1x, d1y)
        a1 = (_cr(d1x, d1y, vx, vy) + _cr(wx, wy, d2x, d2y)
              + _cr(q0x, q0y, d1x, d1y) + _cr(d2x, d2y, p0x, p0y))
        a0 = _cr(p0x, p0y, vx, vy) + K + _cr(wx, wy, q0x, q0y) + _cr(q0x, q0y, p0x, p0y) - A
        s_lo.append(lo)
        s_hi.append(hi)
        ca.append(a2)
        cb.append(a1)
        cc.append(a0)
        edges.append((i, j))
    return AlphaProfile(tuple(s_lo), tuple(s_hi), tuple(ca), tuple(cb), tuple(cc),
                        tuple(edges), H, poly.scale)


def _segment_roots(a, b, c, h, eps_a, eps_s):
    """Zeros of a*u^2 + b*u + c on [0, h]; near-double roots within eps_a count once."""
    cand = []
    if a == 0.0 or abs(a) * h * h <= 1e-15 * (abs(b) * h + abs(c)):
        if b != 0.0:
            cand.append(-c / b)
    else:
        disc = b * b - 4.0 * a * c
        if disc >= 0.0:
            sq = math.sqrt(disc)
            q = -0.5 * (b + math.copysign(sq, b))
            if q != 0.0:
                cand.extend((q / a, c / q))
            else:
                cand.append(0.0)
        else:
            u = -b / (2.0 * a)
            if abs(disc / (4.0 * a)) <= eps_a:
                cand.append(u)
    out = []
    for u in cand:
        if -eps_s <= u <= h + eps_s:
            d = 2.0 * a * u + b
            if d != 0.0:
                step = ((a * u + b) * u + c) / d
                if abs(step) < 1e-3 * h:
                    u -= step
            out.append(min(max(u, 0.0), h))
    f0, fh = c, (a * h + b) * h + c
    if not out and f0 * fh < 0.0:
        out.append(brentq(lambda u: (a * u + b) * u + c, 0.0, h, xtol=1e-15 * max(h, 1.0)))
    return out


def _merge(comps, eps_s):
    comps.sort()
    merged = []
    for lo, hi in comps:
        if merged and lo <= merged[-1][1] + eps_s:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return merged


def _sign(v):
    return 1 if v > 0.0 else -1


def fair_ranges(poly, profile=None):
    """Fair ranges of ``poly`` over the half period, sorted by representative ``s``."""
    prof = profile if profile is not None else alpha_profile(poly)
    H = prof.period
    scale = poly.scale
    eps_a = EPS_ALPHA * scale * scale
    eps_s = EPS_GEOM * scale

    comps = []
    for lo, hi, a, b, c in prof.segments():
        h = hi - lo
        fh = (a * h + b) * h + c
        if abs(a) * h * h <= eps_a and abs(b) * h <= eps_a and abs(c) <= eps_a and abs(fh) <= eps_a:
            comps.append([lo, hi])
            continue
        for u in _segment_roots(a, b, c, h, eps_a, eps_s):
            comps.append([lo + u, lo + u])
    # zeros at the end of the half period are the antipodes of zeros near 0
    comps = [[lo - H, hi - H] if hi >= H - eps_s else [lo, hi] for lo, hi in comps]
    comps = _merge(comps, eps_s)
    if not comps:
        raise RuntimeError("alpha has no zero on the half period; profile is inconsistent")

    while True:
        m = len(comps)
        gaps = []
        for k in range(m):
            lo = comps[k][1]
            hi = comps[k + 1][0] if k + 1 < m else comps[0][0] + H
            if hi - lo <= eps_s:
                gaps.append(0.0)
            else:
                gaps.append(prof.value(0.5 * (lo + hi)))
        dead = [k for k in range(m) if abs(gaps[k]) <= eps_a]
        if not dead:
            break
        k = dead[0]
        if m == 1:
            return [FairRange(0.0, H, True, True)]
        if k + 1 < m:
            comps[k] = [comps[k][0], comps[k + 1][1]]
            del comps[k + 1]
        else:
            # bridge across the wrap: the first range joins the last one
            comps[-1] = [comps[-1][0], comps[0][1] + H]
            del comps[0]
            comps = [[lo - H, hi - H] if lo >= H - eps_s else [lo, hi] for lo, hi in comps]
            comps.sort()

    m = len(comps)
    out = []
    for k in range(m):
        left = _sign(gaps[k - 1]) if k > 0 else -_sign(gaps[m - 1])
        right = _sign(gaps[k])
        lo, hi = comps[k]
        if lo < 0.0:
            lo, hi = lo + H, hi + H
        rep = None
        if hi > lo:
            # a plateau is zero throughout; a merged root cluster is only zero at its roots
            mid = 0.5 * (lo + hi)
            if abs(prof.value(mid)) > 1e-14 * scale * scale:
                rep = min((lo, hi), key=lambda x: abs(prof.value(x)))
        out.append(FairRange(lo, hi, left != right, False, rep))
    out.sort(key=lambda r: r.representative(H))
    return out


def range_chord(poly, rng):
    """Representative fair-bisector chord of a fair range and its child perimeter."""
    H = 0.5 * poly.perimeter
    s = rng.representative(H)
    ch = Chord.on(poly, s, s + H)
    return ch, H + ch.length


def fair_bisectors(poly):
    """One representative chord per fair range, with the common child perimeter."""
    return [range_chord(poly, r) for r in fair_ranges(poly)]


def area_bisector_at(poly, theta):
    """Chord of direction ``theta`` that halves the area of ``poly``.

    The returned chord is directed so that its left piece (the ccw arc from
    ``s_start`` to ``s_end``) lies to the left of the direction vector; the
    chord for ``theta + pi`` is the same line with the sides swapped.
    """
    c, s = math.cos(theta), math.sin(theta)
    nx, ny = -s, c
    ox, oy = poly.centroid
    xs = [x - ox for x in poly.xs]
    ys = [y - oy for y in poly.ys]
    n = len(xs)
    hs = [nx * xs[k] + ny * ys[k] for k in range(n)]
    lo, hi = min(hs), max(hs)
    half = 0.5 * poly.area
    tol = 1e-15 * poly.area
    t = 0.0
    for _ in range(80):
        area, w = _cut_area(xs, ys, hs, t)
        f = area - half
        if f > 0.0:
            lo = t
        else:
            hi = t
        if abs(f) <= tol or hi - lo <= 1e-16 * poly.scale:
            break
        nt = t + f / w if w > 0.0 else 0.5 * (lo + hi)
        if not (lo < nt < hi):
            nt = 0.5 * (lo + hi)
        t = nt
    s_in = s_out = None
    cum = poly.cum
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        above, above1 = hs[k] >= t, hs[k1] >= t
        if above == above1:
            continue
        lam = (hs[k] - t) / (hs[k] - hs[k1])
        sk = cum[k] + lam * poly.lengths[k]
        if above1:
            s_in = sk
        else:
            s_out = sk
    return Chord.on(poly, s_in, s_out)


def _cut_area(xs, ys, hs, t):
    """Area on the side ``height >= t`` and the length of the cut, in one pass."""
    n = len(xs)
    acc = 0.0
    px = py = None
    fx = fy = None
    cuts = []
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        hk, hk1 = hs[k], hs[k1]
        if hk >= t:
            qx, qy = xs[k], ys[k]
            if px is None:
                fx, fy = qx, qy
            else:
                acc += px * qy - qx * py
            px, py = qx, qy
        if (hk >= t) != (hk1 >= t):
            lam = (hk - t) / (hk - hk1)
            qx, qy = xs[k] + lam * (xs[k1] - xs[k]), ys[k] + lam * (ys[k1] - ys[k])
            cuts.append((qx, qy))
            if px is None:
                fx, fy = qx, qy
            else:
                acc += px * qy - qx * py
            px, py = qx, qy
    if px is None:
        return 0.0, 0.0
    acc += px * fy - fx * py
    w = math.hypot(cuts[0][0] - cuts[1][0], cuts[0][1] - cuts[1][1]) if len(cuts) == 2 else 0.0
    return 0.5 * acc, w
