"""
Perimeter curves under a rotating area bisector.

A *slicer* maps an angle ``theta`` to the list of proper solutions living on
the piece cut off by the parent's area bisector of direction ``theta``; each
solution carries a circular position (to follow it as ``theta`` moves) and a
perimeter value ``p``. :func:`trace_graph` follows those solutions around the
full turn, producing gamma branches joined at beta segments (where solutions
are born or die in pairs). :func:`spanning_component` threads a closed curve
that winds once around the period, and :func:`phase_intersections` intersects
that curve with its own half-turn shift.

The same machinery runs at every level of the power-of-two recursion; only the
slicer changes.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment

from .bisect import alpha_profile, area_bisector_at, fair_ranges, range_chord
from .geom import EPS_GEOM, Chord, cut_by_chord

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

EPS_THETA = 1e-6
DTHETA_MIN = TWO_PI / 2 ** 20
JUMP_TOL = 0.05
SEPARATION = 0.5
ROOT_TOL = 1e-9


class ContinuationError(RuntimeError):
    pass


class AmbiguousContinuation(ContinuationError):
    def __init__(self, theta, message=None):
        self.theta = theta
        super().__init__(message or f"ambiguous branch continuation near theta={theta:.9f}")


class NoSpanningComponent(ContinuationError):
    def __init__(self, gap, message=None):
        self.gap = gap
        super().__init__(message or f"no component of the graph spans the period (gap near {gap})")


class BudgetExceeded(ContinuationError):
    """The evaluation cap was hit; ``evaluations`` tells how far the sweep got."""

    def __init__(self, evaluations):
        self.evaluations = evaluations
        super().__init__(f"evaluation budget exhausted after {evaluations} slice evaluations")


class Budget:
    """Shared counter of slice evaluations across a whole solve."""

    def __init__(self, limit=None):
        self.limit = limit
        self.used = 0

    def charge(self, n=1):
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(self.used)


@dataclass(frozen=True)
class SliceItem:
    position: float
    width: float
    p: float
    payload: Any = None


def _circ(a, b):
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def item_distance(a, b):
    return max(0.0, _circ(a.position, b.position) - 0.5 * (a.width + b.width))


def _wrap(x, period):
    """Signed representative of ``x`` modulo ``period`` closest to zero."""
    return (x + 0.5 * period) % period - 0.5 * period


@dataclass
class _FairSlice:
    theta: float
    chord: Chord
    piece: Any
    ranges: list
    items: list


class FairRangeSlicer:
    """Proper fair ranges of ``A(theta)``, one side of the parent's area bisector.

    Positions are ``s / (L_A / 2)`` with ``s`` measured from the bisector's
    start point, which moves continuously with ``theta``.
    """

    level = 1

    def __init__(self, parent, side="left", budget=None):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.parent = parent
        self.offset = 0.0 if side == "left" else math.pi
        self.budget = budget if budget is not None else Budget()
        self._cache = {}

    def slice(self, theta):
        hit = self._cache.get(theta)
        if hit is None:
            self.budget.charge()
            chord = area_bisector_at(self.parent, theta + self.offset)
            piece = cut_by_chord(self.parent, chord)[0]
            ranges = fair_ranges(piece, alpha_profile(piece))
            H = 0.5 * piece.perimeter
            items = []
            for r in ranges:
                if not r.proper:
                    continue
                ch, p = range_chord(piece, r)
                width = 1.0 if r.whole_boundary else (r.s_hi - r.s_lo) / H
                items.append(SliceItem(r.representative(H) / H, width, p, r))
            hit = _FairSlice(theta, chord, piece, ranges, items)
            self._cache[theta] = hit
        return hit

    def piece(self, theta):
        return self.slice(theta).piece

    def items(self, theta):
        return self.slice(theta).items

    def track(self, theta, hint, position=None):
        items = self.items(theta)
        if not items:
            return None
        probe = SliceItem(hint.position if position is None else position, hint.width, hint.p)
        return min(items, key=lambda it: (item_distance(it, probe), abs(it.p - hint.p)))

    def resolve(self, theta, item, target_p=None):
        """Cut ``A(theta)`` along the fair bisector of ``item``.

        For an interval range the chord inside it is chosen to reproduce
        ``target_p`` when that value is reachable.
        """
        sl = self.slice(theta)
        piece = sl.piece
        rng = item.payload
        H = 0.5 * piece.perimeter
        s = rng.representative(H)
        if target_p is not None and (rng.whole_boundary or rng.s_hi - rng.s_lo > EPS_GEOM * piece.scale):
            lo, hi = (0.0, H) if rng.whole_boundary else (rng.s_lo, rng.s_hi)

            def gap(x):
                return H + Chord.on(piece, x, x + H).length - target_p

            grid = np.linspace(lo, hi, 33)
            vals = [gap(x) for x in grid]
            best = int(np.argmin(np.abs(vals)))
            for k in range(len(grid) - 1):
                if vals[k] == 0.0:
                    s = grid[k]
                    break
                if vals[k] * vals[k + 1] < 0.0:
                    s = brentq(gap, grid[k], grid[k + 1], xtol=1e-15)
                    break
            else:
                s = grid[best]
        chord = Chord.on(piece, s, s + H)
        a, b = cut_by_chord(piece, chord)
        tree = {"cut": "fair-bisector", "p": float(H + chord.length),
                "chord": [float(chord.s_start), float(chord.s_end)],
                "points": [[float(v) for v in chord.start], [float(v) for v in chord.end]]}
        return [a, b], tree

    def p_span(self, theta, item):
        """Range of perimeters reachable by chords inside ``item``'s fair range."""
        rng = item.payload
        if rng is None or not (rng.whole_boundary or rng.s_hi > rng.s_lo):
            return item.p, item.p
        piece = self.slice(theta).piece
        H = 0.5 * piece.perimeter
        lo, hi = (0.0, H) if rng.whole_boundary else (rng.s_lo, rng.s_hi)
        vals = [H + Chord.on(piece, x, x + H).length for x in np.linspace(lo, hi, 33)]
        return min(vals + [item.p]), max(vals + [item.p])

    def chord(self, theta):
        """The parent's area bisector at ``theta`` (oriented so the piece is on its left)."""
        return self.slice(theta).chord


@dataclass
class GammaBranch:
    samples: list
    theta_interval: tuple
    end_events: tuple
    nodes: list = field(default_factory=list, repr=False)

    def to_json(self):
        return [[t, p] for t, _, p in self.samples]


@dataclass
class BetaSegment:
    theta: float
    p_interval: tuple
    left: list
    right: list

    @property
    def attached_branches(self):
        return {"left": list(self.left), "right": list(self.right)}

    def to_json(self):
        return [self.theta, self.p_interval[0], self.p_interval[1]]


@dataclass
class PerimeterGraph:
    thetas: list
    node_theta: list
    node_item: list
    sample_nodes: dict
    edges: list
    betas: list
    branches: list
    components: list
    node_component: list
    period: float
    slicer: Any = field(default=None, repr=False)
    grid: list = field(default_factory=list)
    ambiguities: list = field(default_factory=list)

    def crossing_counts(self):
        return {t: len(self.sample_nodes[t]) for t in self.thetas}

    def component_counts(self, comp):
        return {t: sum(1 for v in self.sample_nodes[t] if self.node_component[v] == comp)
                for t in self.thetas}

    def invariants(self):
        """Parity bookkeeping: odd totals, per-component parity, even beta attachment."""
        odd_total = all(n % 2 == 1 for n in self.crossing_counts().values())
        comp_ok = True
        for c in range(len(self.components)):
            par = {n % 2 for n in self.component_counts(c).values()}
            comp_ok &= len(par) == 1
        beta_even = all(len(b.left) % 2 == 0 and len(b.right) % 2 == 0 for b in self.betas)
        spanning = any(self.component_counts(c)[self.thetas[0]] % 2 == 1
                       for c in range(len(self.components)))
        return {"odd_crossings": odd_total, "component_parity": comp_ok,
                "beta_even": beta_even, "has_odd_component": spanning}

    def to_json(self):
        return {
            "branches": [b.to_json() for b in self.branches],
            "betas": [b.to_json() for b in self.betas],
            "period": self.period,
        }


def _cost(A, B):
    ps = max(1e-300, max(abs(it.p) for it in A + B))
    return np.array([[item_distance(a, b) ** 2 + ((a.p - b.p) / ps) ** 2 for b in B] for a in A]), ps


def _same(a, b, ps):
    return item_distance(a, b) <= 1e-12 and abs(a.p - b.p) <= 1e-12 * ps


def _match(A, B, jump_tol=JUMP_TOL, ratio=SEPARATION):
    """Min-cost matching between item lists; returns (pairs, clean, distances).

    The matching is clean when counts agree and every partner is close and
    well separated from the runner-up. Exact duplicates (two solutions that
    trace the same values) are interchangeable and never count as runner-up.
    """
    na, nb = len(A), len(B)
    if na == 0 or nb == 0:
        return [], na == nb, {}
    cost, ps = _cost(A, B)
    rows, cols = linear_sum_assignment(cost)
    pairs = [(int(i), int(j)) for i, j in zip(rows, cols)]
    clean = na == nb
    dist = {}
    for i, j in pairs:
        d = item_distance(A[i], B[j])
        dist[(i, j)] = d
        if not clean:
            continue
        rivals = [item_distance(A[i], B[k]) for k in range(nb) if k != j and not _same(B[k], B[j], ps)]
        rivals += [item_distance(A[k], B[j]) for k in range(na) if k != i and not _same(A[k], A[i], ps)]
        if d > jump_tol or d > ratio * min(rivals, default=math.inf):
            clean = False
    return pairs, clean, dist


def _assign(A, B, ia, ib, theta, jump_tol, ambiguous):
    """Matching of equal-size item lists at the resolution floor.

    A swap of two partners that costs the same but would connect different
    perimeter values is reported through ``ambiguous(theta)``.
    """
    cost, ps = _cost(A, B)
    rows, cols = linear_sum_assignment(cost)
    for x in range(len(rows)):
        for y in range(x + 1, len(rows)):
            i, j, i2, j2 = rows[x], cols[x], rows[y], cols[y]
            here = cost[i, j] + cost[i2, j2]
            swap = cost[i, j2] + cost[i2, j]
            if abs(swap - here) <= 1e-13 * max(here, 1e-300) and abs(A[i].p - A[i2].p) > 1e-9 * ps:
                ambiguous(theta)
    out = []
    for i, j in zip(rows, cols):
        d = item_distance(A[i], B[j])
        out.append((ia[i], ib[j], "edge" if d <= jump_tol else "jump"))
    return out


def trace_graph(slicer, samples=256, period=TWO_PI, eps_theta=EPS_THETA,
                dtheta_min=DTHETA_MIN, jump_tol=JUMP_TOL, strict=False):
    """Follow every proper solution of ``slicer`` around one period.

    The grid is bisected wherever consecutive samples cannot be matched
    unambiguously: down to ``eps_theta`` around births and deaths (which
    become beta segments) and to ``dtheta_min`` elsewhere. A tie that is
    still unresolved at the floor is recorded in ``ambiguities`` and matched
    by least cost, or raises AmbiguousContinuation when ``strict``.
    """
    if samples < 64:
        raise ValueError("theta grid needs at least 64 samples")
    ambiguities = []

    def ambiguous(theta):
        if strict:
            raise AmbiguousContinuation(theta)
        if not ambiguities or ambiguities[-1] != theta:
            log.debug("ambiguous continuation at theta=%.9f", theta)
            ambiguities.append(theta)
    node_theta, node_item = [], []
    sample_nodes = {}
    edges = []        # (u, v, kind) with v one step later in theta
    beta_raw = []     # (theta, [(node, item, side)])

    def add_sample(t):
        ids = []
        for it in slicer.items(t):
            ids.append(len(node_theta))
            node_theta.append(t)
            node_item.append(it)
        sample_nodes[t] = ids
        return ids

    def link(ta, ia, tb, ib):
        # tb may equal ta + (something wrapping); the width is measured modulo the period
        stack = [(ta, ia, tb, ib)]
        while stack:
            ta, ia, tb, ib = stack.pop()
            A = [node_item[i] for i in ia]
            B = [node_item[i] for i in ib]
            pairs, clean, dist = _match(A, B, jump_tol)
            width = (tb - ta) % period if tb != ta else 0.0
            if clean:
                edges.extend((ia[i], ib[j], "edge") for i, j in pairs)
                continue
            floor = dtheta_min if len(A) == len(B) else eps_theta
            if width > floor:
                tm = (ta + 0.5 * width) % period
                im = add_sample(tm)
                stack.append((tm, im, tb, ib))
                stack.append((ta, ia, tm, im))
                continue
            if len(A) == len(B):
                edges.extend(_assign(A, B, ia, ib, ta, jump_tol, ambiguous))
                continue
            # count change at the floor: keep the closest min(na, nb) pairs, the
            # rest (an even number, all on one side) are born or die together
            matched_a, matched_b = set(), set()
            for (i, j), d in dist.items():
                edges.append((ia[i], ib[j], "edge" if d <= jump_tol else "jump"))
                matched_a.add(i)
                matched_b.add(j)
            loose = [(ia[i], A[i], "left") for i in range(len(A)) if i not in matched_a]
            loose += [(ib[j], B[j], "right") for j in range(len(B)) if j not in matched_b]
            beta_raw.append(((ta + 0.5 * width) % period, loose))

    grid = [period * k / samples for k in range(samples)]
    ids = [add_sample(t) for t in grid]
    for k in range(samples):
        link(grid[k], ids[k], grid[(k + 1) % samples], ids[(k + 1) % samples])

    nn = len(node_theta)
    betas = []
    for theta_b, loose in beta_raw:
        left = [v for v, _, side in loose if side == "left"]
        right = [v for v, _, side in loose if side == "right"]
        ps = [it.p for _, it, _ in loose]
        betas.append(BetaSegment(theta_b, (min(ps), max(ps)), left, right))
    betas.sort(key=lambda b: b.theta)

    succ = [None] * nn
    pred = [None] * nn
    kind_of = {}
    for u, v, kind in edges:
        succ[u] = v
        pred[v] = u
        kind_of[(u, v)] = kind
    beta_of_left = {}
    beta_of_right = {}
    for bi, b in enumerate(betas):
        for v in b.left:
            beta_of_left[v] = bi
        for v in b.right:
            beta_of_right[v] = bi

    parent = list(range(nn + len(betas)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for u, v, _ in edges:
        union(u, v)
    for bi, b in enumerate(betas):
        for v in b.left + b.right:
            union(v, nn + bi)
    roots = {}
    node_component = []
    for v in range(nn):
        r = find(v)
        node_component.append(roots.setdefault(r, len(roots)))
    components = [[] for _ in roots]
    for v in range(nn):
        components[node_component[v]].append(v)

    branches = []
    seen = [False] * nn
    for v0 in range(nn):
        if seen[v0]:
            continue
        start = v0
        steps = 0
        while pred[start] is not None and pred[start] != v0 and steps <= nn:
            start = pred[start]
            steps += 1
        closed = pred[start] == v0 or (pred[v0] is not None and start == v0)
        chain = []
        v = start
        lifted = node_theta[start]
        while v is not None and not seen[v]:
            seen[v] = True
            chain.append((v, lifted))
            nxt = succ[v]
            if nxt is not None:
                lifted += _wrap(node_theta[nxt] - node_theta[v], period) or 0.0
            v = nxt
        if closed and succ[chain[-1][0]] == chain[0][0]:
            ends = ("wrapped-period", "wrapped-period")
        else:
            ends = ("beta" if chain[0][0] in beta_of_right else "open",
                    "beta" if chain[-1][0] in beta_of_left else "open")
        samples_out = [(t, node_item[v].position, node_item[v].p) for v, t in chain]
        branches.append(GammaBranch(samples_out, (chain[0][1], chain[-1][1]), ends,
                                    [v for v, _ in chain]))

    return PerimeterGraph(
        thetas=sorted(sample_nodes), node_theta=node_theta, node_item=node_item,
        sample_nodes=sample_nodes, edges=edges, betas=betas, branches=branches,
        components=components, node_component=node_component, period=period,
        slicer=slicer, grid=grid, ambiguities=ambiguities,
    )


def perimeter_graph(parent, side="left", theta_samples=256, budget=None):
    """Graph of fair-bisector perimeters of one half of ``parent`` over a full turn."""
    return trace_graph(FairRangeSlicer(parent, side, budget), theta_samples)


class Intersection(NamedTuple):
    """Point where the curve meets its shifted copy.

    ``theta_lift`` and ``partner_theta`` are the lifted angles of the two
    crossing segments; ``item`` and ``partner_item`` are the solutions there
    (None for synthetic curves or unrefined crossings).
    """

    theta: float
    p: float
    segment: int = -1
    partner_segment: int = -1
    refined: bool = True
    theta_lift: float = 0.0
    partner_theta: float = 0.0
    item: Any = None
    partner_item: Any = None


@dataclass
class PeriodicCurve:
    """Closed curve on the (theta, p) cylinder, traversed with winding number one.

    ``theta`` is lifted (continuous along the traversal); the closing segment
    runs from the last vertex to ``theta[0] + period``. ``kinds[k]`` labels
    segment ``k`` as ``"edge"`` (a sampled stretch of one branch, re-evaluable
    through ``tracker``), ``"beta"`` or ``"jump"`` (vertical pieces).
    """

    theta: np.ndarray
    p: np.ndarray
    period: float = TWO_PI
    source: Any = None
    kinds: list = None
    items: Optional[list] = None
    tracker: Any = field(default=None, repr=False)
    function: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        self.p = np.asarray(self.p, dtype=float)
        if self.kinds is None:
            self.kinds = ["edge"] * len(self.theta)

    @classmethod
    def from_function(cls, f, samples=256, period=TWO_PI):
        th = period * np.arange(samples) / samples
        return cls(th, np.array([f(t) for t in th]), period, function=f)

    def __len__(self):
        return len(self.theta)

    def vertex(self, k):
        m = len(self.theta)
        if k < m:
            return self.theta[k], self.p[k]
        return self.theta[k - m] + self.period, self.p[k - m]

    def segment(self, k):
        t0, p0 = self.vertex(k)
        t1, p1 = self.vertex(k + 1)
        return t0, p0, t1, p1

    def item_at(self, k, theta):
        """Solution item on segment ``k`` at lifted ``theta`` (None if unavailable)."""
        if self.tracker is None or self.items is None or self.kinds[k] != "edge":
            return None
        t0, _, t1, _ = self.segment(k)
        a, b = self.items[k], self.items[(k + 1) % len(self.items)]
        lam = 0.0 if t1 == t0 else min(max((theta - t0) / (t1 - t0), 0.0), 1.0)
        pos = (a.position + lam * _wrap(b.position - a.position, 1.0)) % 1.0
        probe = SliceItem(pos, a.width + lam * (b.width - a.width), a.p + lam * (b.p - a.p))
        return self.tracker.track(theta % self.period, probe)

    def evaluate(self, k, theta):
        if self.function is not None:
            return float(self.function(theta))
        it = self.item_at(k, theta)
        if it is not None:
            return it.p
        t0, p0, t1, p1 = self.segment(k)
        if t1 == t0:
            return None
        lam = (theta - t0) / (t1 - t0)
        return p0 + lam * (p1 - p0)

    def subdivided(self, ks, min_width=1e-12):
        """Copy with a freshly evaluated midpoint inserted into each edge segment in ``ks``.

        A midpoint whose tracked solution strays from both neighbours (the
        tracker hopped to another branch) is skipped.
        """
        theta, p = list(self.theta), list(self.p)
        kinds = list(self.kinds)
        items = None if self.items is None else list(self.items)
        for k in sorted(set(ks), reverse=True):
            if kinds[k] != "edge":
                continue
            t0, p0, t1, p1 = self.segment(k)
            if abs(t1 - t0) <= min_width:
                continue
            tm = 0.5 * (t0 + t1)
            it = None
            if self.function is not None:
                pm = float(self.function(tm))
            else:
                it = self.item_at(k, tm)
                if it is None:
                    continue
                a, b = self.items[k], self.items[(k + 1) % len(self.items)]
                if min(item_distance(it, a), item_distance(it, b)) > JUMP_TOL:
                    continue
                pm = it.p
            theta.insert(k + 1, tm)
            p.insert(k + 1, pm)
            kinds.insert(k + 1, "edge")
            if items is not None:
                items.insert(k + 1, it)
        return PeriodicCurve(theta, p, self.period, self.source, kinds, items,
                             self.tracker, self.function)

    def to_json(self):
        return {"samples": [[float(t), float(p)] for t, p in zip(self.theta, self.p)],
                "kinds": list(self.kinds), "period": self.period}


def spanning_component(G):
    """Closed curve through a component of ``G`` that winds once around the period."""
    nn = len(G.node_theta)
    period = G.period
    t0 = G.thetas[0]
    odd = [c for c in range(len(G.components)) if G.component_counts(c)[t0] % 2 == 1]
    if not odd:
        raise NoSpanningComponent(t0)

    adj = {}

    def add(u, v, dt, kind):
        adj.setdefault(u, []).append((v, dt, kind))
        adj.setdefault(v, []).append((u, -dt, kind))

    for u, v, kind in G.edges:
        add(u, v, _wrap(G.node_theta[v] - G.node_theta[u], period), kind)
    for bi, b in enumerate(G.betas):
        bn = nn + bi
        for v in b.left:
            add(v, bn, _wrap(b.theta - G.node_theta[v], period), "beta")
        for v in b.right:
            add(bn, v, _wrap(G.node_theta[v] - b.theta, period), "beta")

    for comp in odd:
        root = min(G.components[comp], key=lambda v: (G.node_theta[v], v))
        lift = {root: 0.0}
        par = {root: None}
        depth = {root: 0}
        order = deque([root])
        found = None
        tree = set()
        while order and found is None:
            u = order.popleft()
            for v, dt, kind in adj.get(u, []):
                if v not in lift:
                    lift[v] = lift[u] + dt
                    par[v] = (u, dt, kind)
                    depth[v] = depth[u] + 1
                    tree.add((u, v))
                    tree.add((v, u))
                    order.append(v)
                elif (u, v) not in tree:
                    w = round((lift[u] + dt - lift[v]) / period)
                    if w % 2 != 0:
                        found = (u, v, dt, kind, w)
                        break
        if found is None:
            continue
        u, v, dt, kind, w = found
        # path root -> u, closing edge u -> v, path v -> root
        pu, pv = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = par[a][0]
            pu.append(a)
        while depth[b] > depth[a]:
            b = par[b][0]
            pv.append(b)
        while a != b:
            a = par[a][0]
            b = par[b][0]
            pu.append(a)
            pv.append(b)
        cycle = pu[::-1] + pv[:-1]   # lca ... u, v ... (child of lca)
        if w < 0:
            cycle = cycle[::-1]
        return _cycle_curve(G, cycle, adj, comp)
    raise NoSpanningComponent(t0, "no cycle with odd winding in any odd component")


def _cycle_curve(G, cycle, adj, comp):
    nn = len(G.node_theta)
    period = G.period
    step = {}
    for u in cycle:
        for v, dt, kind in adj[u]:
            step.setdefault((u, v), (dt, kind))
    m = len(cycle)
    pts = []
    lifted = 0.0
    for k in range(m):
        u = cycle[k]
        dt, kind = step[(u, cycle[(k + 1) % m])]
        if u < nn:
            # the kind labels the segment leaving this vertex; item -> beta edges are "beta"
            pts.append((lifted, u, kind))
        lifted += dt
    if abs(lifted - period) > 1e-6:
        raise NoSpanningComponent(lifted, "extracted cycle does not wind once")
    base = G.node_theta[pts[0][1]]
    theta = np.array([base + t for t, _, _ in pts])
    start = int(np.argmin(np.mod(theta, period)))
    nodes = [v for _, v, _ in pts]
    kinds = [kd for _, _, kd in pts]
    theta = np.roll(theta, -start)
    nodes = nodes[start:] + nodes[:start]
    kinds = kinds[start:] + kinds[:start]
    shift = math.floor(theta[0] / period) * period
    theta = theta - shift
    # a rolled lifted sequence drops by one period where it wraps; restore continuity
    for k in range(1, len(theta)):
        while theta[k] < theta[k - 1] - 0.5 * period:
            theta[k] += period
        while theta[k] > theta[k - 1] + 0.5 * period:
            theta[k] -= period
    items = [G.node_item[v] for v in nodes]
    p = np.array([it.p for it in items])
    curve = PeriodicCurve(theta, p, period, source=comp, kinds=kinds, items=items, tracker=G.slicer)
    curve.nodes = nodes
    return curve


def _orient(ax, ay, bx, by, cx, cy):
    """Sign-exact orientation of c relative to a->b.

    Near-zero results are recomputed in rational arithmetic so that a point
    sitting on a shared vertex gets the same answer from both segments.
    """
    left = (bx - ax) * (cy - ay)
    right = (by - ay) * (cx - ax)
    det = left - right
    if abs(det) > 1e-14 * (abs(left) + abs(right)):
        return det
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (ax, ay, bx, by, cx, cy))
    return float((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def _coincident(curve, phase, tol):
    """Whether the curve and its shifted copy agree at every vertex."""
    period = curve.period
    m = len(curve)
    seg = np.array([curve.segment(k) for k in range(m)])
    lo = np.minimum(seg[:, 0], seg[:, 2])
    hi = np.maximum(seg[:, 0], seg[:, 2])
    # cheap pass on the polyline first; sampling error is far below this slack
    slack = max(tol, 1e-3 * max(1e-300, float(np.ptp(curve.p))))
    for exact, limit in ((False, slack), (True, tol)):
        for j in range(m):
            tj, pj = curve.vertex(j)
            x = lo + np.mod(tj + phase - lo, period)
            cover = np.nonzero(x <= hi + 1e-15)[0]
            best = math.inf
            for k in cover:
                if exact:
                    val = curve.evaluate(k, x[k])
                else:
                    t0, p0, t1, p1 = seg[k]
                    val = p0 if t1 == t0 else p0 + (x[k] - t0) / (t1 - t0) * (p1 - p0)
                if val is not None:
                    best = min(best, abs(val - pj))
                if best <= limit:
                    break
            if best > limit:
                return False
    return True


def _crossings(curve, phase):
    """Segment pairs (k, j, m) where the curve crosses its copy shifted back by ``phase``.

    Degenerate contacts are resolved by nudging the shifted copy by an
    infinitesimal (+delta, +eps), so each transversal crossing counts once.
    """
    period = curve.period
    m = len(curve)
    seg = np.array([curve.segment(k) for k in range(m)])
    a0t, a0p, a1t, a1p = seg.T
    b0t, b0p, b1t, b1p = seg.T.copy()
    b0t = b0t - phase
    b1t = b1t - phase
    amid = 0.5 * (a0t + a1t)
    bmid = 0.5 * (b0t + b1t)
    K = np.round((amid[:, None] - bmid[None, :]) / period)
    B0t = b0t[None, :] + K * period
    B1t = b1t[None, :] + K * period
    A0t, A1t = a0t[:, None], a1t[:, None]
    A0p, A1p = a0p[:, None], a1p[:, None]
    B0p, B1p = b0p[None, :], b1p[None, :]
    box = ((np.minimum(A0t, A1t) <= np.maximum(B0t, B1t)) & (np.minimum(B0t, B1t) <= np.maximum(A0t, A1t))
           & (np.minimum(A0p, A1p) <= np.maximum(B0p, B1p)) & (np.minimum(B0p, B1p) <= np.maximum(A0p, A1p)))
    cand = np.argwhere(box)
    out = []
    for k, j in cand:
        ax, ay, bx, by = a0t[k], a0p[k], a1t[k], a1p[k]
        cx, cy = B0t[k, j], b0p[j]
        dx, dy = B1t[k, j], b1p[j]
        # orientation of the shifted endpoints w.r.t. segment a, nudged copy
        s1 = _orient(ax, ay, bx, by, cx, cy) or (bx - ax) or -(by - ay)
        s2 = _orient(ax, ay, bx, by, dx, dy) or (bx - ax) or -(by - ay)
        if (s1 > 0) == (s2 > 0):
            continue
        s3 = _orient(cx, cy, dx, dy, ax, ay) or -(dx - cx) or (dy - cy)
        s4 = _orient(cx, cy, dx, dy, bx, by) or -(dx - cx) or (dy - cy)
        if (s3 > 0) == (s4 > 0):
            continue
        den = (bx - ax) * (dy - cy) - (by - ay) * (dx - cx)
        if den == 0.0:
            lam = 0.5
        else:
            lam = ((cx - ax) * (dy - cy) - (cy - ay) * (dx - cx)) / den
        lam = min(max(lam, 0.0), 1.0)
        out.append((int(k), int(j), int(K[k, j]), ax + lam * (bx - ax), ay + lam * (by - ay)))
    return out


def _refine_pair(curve, k, j, shift, phase, xtol):
    period = curve.period

    def d(t):
        pa = curve.evaluate(k, t)
        pb = curve.evaluate(j, t + phase - shift * period)
        if pa is None or pb is None:
            return None
        return pa - pb

    ta0, _, ta1, _ = curve.segment(k)
    tb0, _, tb1, _ = curve.segment(j)
    tb0, tb1 = tb0 - phase + shift * period, tb1 - phase + shift * period
    lo = max(min(ta0, ta1), min(tb0, tb1))
    hi = min(max(ta0, ta1), max(tb0, tb1))
    if hi - lo <= 0.0 or curve.kinds[k] != "edge" or curve.kinds[j] != "edge":
        return None
    dlo, dhi = d(lo), d(hi)
    if dlo is None or dhi is None:
        return None
    if dlo == 0.0:
        return lo, curve.evaluate(k, lo)
    if dhi == 0.0:
        return hi, curve.evaluate(k, hi)
    if dlo * dhi < 0.0:
        root = brentq(d, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
        # a sign change across a jump (the tracker switching branches) is not a root
        dr = d(root)
        if dr is not None and abs(dr) <= ROOT_TOL * max(1.0, abs(dlo), abs(dhi)):
            return root, curve.evaluate(k, root)
        # unless both sides are interval ranges whose reachable perimeters overlap
        return _plateau_root(curve, k, j, root, phase - shift * period)
    return None


def _plateau_root(curve, k, j, root, offset):
    span = getattr(curve.tracker, "p_span", None)
    if span is None:
        return None
    ia, ib = curve.item_at(k, root), curve.item_at(j, root + offset)
    if ia is None or ib is None:
        return None
    a0, a1 = span(root % curve.period, ia)
    b0, b1 = span((root + offset) % curve.period, ib)
    lo, hi = max(a0, b0), min(a1, b1)
    if hi < lo - ROOT_TOL * max(1.0, abs(a1), abs(b1)):
        return None
    for p in (ia.p, ib.p):
        if lo <= p <= hi:
            return root, p
    return root, 0.5 * (lo + hi)


def _refine(curve, k, j, shift, phase, t_est, p_est, xtol, reach=1):
    """Root of the exact perimeter difference near a polyline crossing.

    The polyline is only a sampled approximation; close to a fold the exact
    crossing can sit on a neighbouring segment, so nearby pairs are tried
    when the direct bracket fails. Returns (theta, p, k, j, refined).
    """
    m = len(curve)
    offsets = sorted(((a, b) for a in range(-reach, reach + 1) for b in range(-reach, reach + 1)),
                     key=lambda ab: (abs(ab[0]) + abs(ab[1]), ab))
    for a, b in offsets:
        k2, j2 = k + a, j + b
        if not (0 <= k2 < m and 0 <= j2 < m):
            continue
        hit = _refine_pair(curve, k2, j2, shift, phase, xtol)
        if hit is not None:
            return hit[0], hit[1], k2, j2, True
    return t_est, p_est, k, j, False


def _cancel_local(found, m, period, tol, reach=3):
    """Drop crossings two at a time where the polyline crossed the same point repeatedly.

    Near a crossing that sits on a shared vertex the sampled polylines can
    cross three times (or touch twice) where the exact curves cross once (or
    not at all). Copies from neighbouring segments are reduced modulo 2;
    copies from distant segments are separate branches and all kept.
    """
    def near(a, b):
        dk = abs(a[2] - b[2]) % m
        dj = abs(a[3] - b[3]) % m
        dt = abs(a[0] - b[0]) % period
        return (min(dk, m - dk) <= reach and min(dj, m - dj) <= reach
                and min(dt, period - dt) <= tol and abs(a[1] - b[1]) <= tol)

    groups = []
    for f in found:
        for g in groups:
            if near(g[0], f):
                g.append(f)
                break
        else:
            groups.append([f])
    return [g[0] for g in groups if len(g) % 2 == 1]


def phase_intersections(curve, phase=math.pi, period=None, tol=1e-12, coincidence_tol=1e-9,
                        max_rounds=24, refine=True):
    """Proper intersections of ``curve`` with its copy shifted by ``phase``.

    Returns points ``(theta, p)`` with ``p = curve(theta) = curve(theta + phase)``,
    ``theta`` reduced to ``[0, period)`` and sorted. If the two curves coincide
    everywhere the single canonical point at ``theta = 0`` is returned.

    Crossings are detected on the sampled polyline (so their parity is exact)
    and then pinned down on the exact curve; segments where that fails are
    subdivided and the search repeats, up to ``max_rounds`` times. With
    ``refine=False`` the polyline estimates are returned as they are, for
    callers that refine lazily through :func:`refine_intersection`.
    """
    if period is not None and abs(period - curve.period) > 1e-15:
        raise ValueError("curve period does not match")
    period = curve.period
    scale = max(1.0, float(np.max(np.abs(curve.p))))
    spread = float(np.ptp(curve.p))
    if spread <= coincidence_tol * scale or _coincident(curve, phase, coincidence_tol * scale):
        k0 = 0
        for k in range(len(curve)):
            t0, _, t1, _ = curve.segment(k)
            if min(t0, t1) <= 0.0 <= max(t0, t1) or min(t0, t1) <= period <= max(t0, t1):
                k0 = k
                break
        t0, _, t1, _ = curve.segment(k0)
        x = 0.0 if min(t0, t1) <= 0.0 <= max(t0, t1) else period
        val = curve.evaluate(k0, x)
        p0 = float(curve.p[k0] if val is None else val)
        # partner: the segment covering x + phase whose value is closest to p0
        best, j0, x2 = math.inf, k0, x + phase
        for k in range(len(curve)):
            t0, _, t1, _ = curve.segment(k)
            y = min(t0, t1) + (x + phase - min(t0, t1)) % period
            if y <= max(t0, t1):
                v = curve.evaluate(k, y)
                if v is not None and abs(v - p0) < best:
                    best, j0, x2 = abs(v - p0), k, y
        return [Intersection(0.0, p0, k0, j0, True, float(x), float(x2), curve.item_at(k0, x), curve.item_at(j0, x2))]

    if not refine:
        out = []
        for k, j, shift, t, p in _crossings(curve, phase):
            tr = t % period
            out.append(Intersection(float(0.0 if tr >= period - 1e-13 else tr), float(p), k, j, False,
                                    float(t), float(t + phase - shift * period)))
        out.sort(key=lambda r: (r.theta, r.segment, r.partner_segment))
        return out
    for _ in range(max_rounds + 1):
        found, stuck = [], set()
        for k, j, shift, t_est, p_est in _crossings(curve, phase):
            t, p, k2, j2, ok = _refine(curve, k, j, shift, phase, t_est, p_est, tol)
            if not ok:
                stuck.update((k, j))
            found.append((t, p, k2, j2, ok, shift))
        if not stuck:
            break
        finer = curve.subdivided(stuck)
        if len(finer) == len(curve):
            break
        curve = finer
    found = _cancel_local(found, len(curve), period, tol=max(1e3 * tol, 1e-10) * scale)
    out = []
    for t, p, k, j, ok, shift in found:
        tr = t % period
        if tr >= period - 1e-13:
            tr = 0.0
        t2 = t + phase - shift * period
        item = curve.item_at(k, t) if ok else None
        partner = curve.item_at(j, t2) if ok else None
        out.append(Intersection(float(tr), float(p), k, j, ok, float(t), float(t2), item, partner))
    # distinct segment pairs are distinct crossings even when they land on the
    # same (theta, p): mirror-image branches can trace identical perimeters
    out.sort(key=lambda r: (r.theta, r.segment, r.partner_segment))
    return out


def refine_intersection(curve, r, phase=math.pi, tol=1e-12):
    """Pin an unrefined crossing from ``phase_intersections(..., refine=False)`` to the exact curve.

    Returns the refined Intersection, or None when no bracket is found nearby.
    """
    period = curve.period
    shift = round((r.theta_lift + phase - r.partner_theta) / period)
    t, p, k, j, ok = _refine(curve, r.segment, r.partner_segment, shift, phase, r.theta_lift, r.p,
                             tol, reach=2)
    if not ok:
        return None
    t2 = t + phase - shift * period
    tr = t % period
    return Intersection(float(0.0 if tr >= period - 1e-13 else tr), float(p), k, j, True,
                        float(t), float(t2), curve.item_at(k, t), curve.item_at(j, t2))


def intersection_pairs(points, phase=math.pi, period=TWO_PI, tol=1e-7):
    """Group intersections into (theta, theta + phase) pairs; unpaired points are dropped.

    A crossing of segment k with the shifted segment j is paired with the
    crossing of j with the shifted k when both are present, otherwise with
    any unused point ``phase`` away at the same perimeter.
    """
    used = set()
    pairs = []
    by_seg = {}
    for a, r in enumerate(points):
        by_seg.setdefault((r.segment, r.partner_segment), []).append(a)
    for a, r in enumerate(points):
        if a in used:
            continue
        mates = [b for b in by_seg.get((r.partner_segment, r.segment), []) if b != a and b not in used]
        mates += [b for b in range(len(points)) if b != a and b not in used and b not in mates]
        for b in mates:
            q = points[b]
            if abs(_wrap(q.theta - r.theta - phase, period)) <= tol \
                    and abs(q.p - r.p) <= tol * max(1.0, abs(r.p)):
                used.update((a, b))
                pairs.append((r, q))
                break
    return pairs
