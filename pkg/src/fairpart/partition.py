"""
Fair partitions into 2, 4, 8, ... pieces.

N = 2 cuts along a proper fair bisector. For N = 2^k with k >= 2 the parent
is split by a rotating area bisector; each half is solved for 2^(k-1) pieces
as a function of the rotation angle, and the angle is chosen where the two
halves reach the same common perimeter (an intersection of the perimeter
curve with its half-turn shift). The per-angle sub-solutions come from a
slicer: fair bisectors for k = 2, recursively solved halves for k >= 3.

``naive_recursive_4`` is the plain "bisect, then bisect again" scheme, kept to
show that it equalises areas but not perimeters.
"""

from __future__ import annotations

import copy
import logging
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
from scipy.optimize import brentq

from .bisect import area_bisector_at, fair_ranges, range_chord
from .curves import (
    Budget,
    BudgetExceeded,
    ContinuationError,
    FairRangeSlicer,
    SliceItem,
    intersection_pairs,
    item_distance,
    phase_intersections,
    refine_intersection,
    spanning_component,
    trace_graph,
)
from .geom import Polygon, PartitionReport, cut_by_chord, validate_partition

log = logging.getLogger(__name__)

AREA_TOL = 1e-8
PERIMETER_TOL = 1e-6

THETA_SAMPLES = 256
PHI_SAMPLES = 64
# resolution floor for sweeps over recursively solved halves; each sample there
# is a whole inner solve, and the floor only places branch ends (the solution
# itself is root-found on the branches)
OUTER_FLOOR = 2.0 * math.pi / 2 ** 9


class UnsupportedN(ValueError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"unsupported N={n}: only powers of two (2, 4, 8, ...) can be solved")


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class FairPartitionResult:
    pieces: tuple
    cut_tree: dict
    report: PartitionReport
    residuals: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.pieces)

    def ok(self, area_tol=AREA_TOL, perimeter_tol=PERIMETER_TOL):
        return self.report.ok(area_tol, perimeter_tol)

    def to_json(self):
        return {
            "pieces": [[[float(x), float(y)] for x, y in zip(p.xs, p.ys)] for p in self.pieces],
            "cut_tree": self.cut_tree,
            "report": self.report.to_dict(),
        }


def _number_leaves(tree, counter):
    kids = []
    for child in tree.get("children", [None, None]):
        if child is None:
            kids.append({"piece": counter[0]})
            counter[0] += 1
        else:
            kids.append(_number_leaves(child, counter))
    out = dict(tree)
    out["children"] = kids
    return out


def _finish(parent, pieces, tree):
    report = validate_partition(parent, pieces)
    residuals = {"area_spread": report.area_spread, "perimeter_spread": report.perimeter_spread}
    return FairPartitionResult(tuple(pieces), _number_leaves(tree, [0]), report, residuals)


def _chord_record(chord):
    return {"chord": [float(chord.s_start), float(chord.s_end)],
            "points": [[float(v) for v in chord.start], [float(v) for v in chord.end]]}


# ---------------------------------------------------------------- N = 2

def _fair_split(poly):
    """Pieces and cut record for the first proper fair bisector of ``poly``."""
    proper = [r for r in fair_ranges(poly) if r.proper]
    chord, p = range_chord(poly, proper[0])
    tree = {"cut": "fair-bisector", "p": float(p), **_chord_record(chord)}
    return list(cut_by_chord(poly, chord)), tree


def fair_partition_2(poly):
    """Two pieces of equal area and perimeter, cut along the first proper fair bisector."""
    pieces, tree = _fair_split(poly)
    return _finish(poly, pieces, tree)


# ---------------------------------------------------------------- shared solve

class Solution(NamedTuple):
    """One solution of the half-turn condition at angle ``theta`` in [0, pi).

    Crossings that could not be pinned to the exact curve are kept as
    placeholders (``item_a is None``): they carry the polyline estimate so
    that counts stay consistent, but cannot be assembled into pieces.
    """

    theta: float
    p: float
    item_a: Any
    item_b: Any

    @property
    def exact(self):
        return self.item_a is not None and self.item_b is not None


def _solution(r):
    if r.item is None or r.partner_item is None:
        t = r.theta if r.theta < math.pi else r.theta - math.pi
        return Solution(t, r.p, None, None)
    if r.theta < math.pi:
        return Solution(r.theta, r.p, r.item, r.partner_item)
    return Solution(r.theta - math.pi, r.p, r.partner_item, r.item)


def _curve(slicer, samples):
    if slicer.level >= 2:
        return spanning_component(trace_graph(slicer, samples, eps_theta=OUTER_FLOOR, dtheta_min=OUTER_FLOOR))
    return spanning_component(trace_graph(slicer, samples))


def _odd_part(sols, tol=1e-11):
    """Drop coincident solutions in pairs, keeping one of each odd-sized group.

    Mirror-image branches make the spanning curve retrace itself, so one
    geometric solution can appear several times. Copies move together under
    any deformation, so discarding them two at a time keeps every parity
    count intact.
    """
    groups = []
    for s in sols:
        for g in groups:
            r = g[0]
            dt = abs(s.theta - r.theta) % math.pi
            if min(dt, math.pi - dt) <= tol and abs(s.p - r.p) <= tol * max(1.0, abs(r.p)):
                g.append(s)
                break
        else:
            groups.append([s])
    return [g[0] for g in groups if len(g) % 2 == 1]


def _all_solutions(slicer, samples):
    """Refined half-turn solutions of ``slicer``, one per antipodal pair, sorted by angle."""
    ints = phase_intersections(_curve(slicer, samples))
    if len(ints) == 1:
        sols = [_solution(ints[0])]
    else:
        sols = [_solution(a if a.theta < math.pi else b) for a, b in intersection_pairs(ints)]
    sols = _odd_part(sols)
    return sorted(sols, key=lambda s: (s.theta, s.p))


def _lazy_solutions(slicer, samples):
    """Yield half-turn solutions in order of estimated angle, refining one at a time."""
    curve = _curve(slicer, samples)
    raw = phase_intersections(curve, refine=False)
    if len(raw) == 1 and raw[0].item is not None:
        yield _solution(raw[0])
        return
    order = sorted(raw, key=lambda r: (r.theta % math.pi, r.theta))
    for r in order:
        fine = refine_intersection(curve, r)
        if fine is None:
            log.debug("crossing near theta=%.6f did not refine", r.theta)
            continue
        yield _solution(fine)


def _reflect(pieces, center):
    cx, cy = center
    return [Polygon._trusted(2.0 * cx - np.asarray(p.xs), 2.0 * cy - np.asarray(p.ys)) for p in pieces]


def _symmetric(poly, depth, budget, theta_samples, phi_samples):
    """Centrally symmetric parent: both halves of any area bisector are congruent.

    The halves' perimeter curves coincide, so the canonical angle 0 is used;
    one half is solved and the other is its point reflection.
    """
    chord = area_bisector_at(poly, 0.0)
    a, b = cut_by_chord(poly, chord)
    center = poly.centroid
    pieces_a, tree_a = _solve(a, depth - 1, budget, theta_samples, phi_samples)
    pieces_b = _reflect(pieces_a, center)
    # the mirrored subtree keeps the first half's chord records; its pieces are
    # those pieces reflected through the centre
    tree_b = {**copy.deepcopy(tree_a), "reflected_through": [float(center[0]), float(center[1])]}
    tree = {"cut": "area-bisector", "theta": 0.0, "symmetric": True, **_chord_record(chord),
            "children": [tree_a, tree_b]}
    return pieces_a + pieces_b, tree


def _solve(poly, depth, budget, theta_samples, phi_samples):
    """Pieces and cut tree of a 2^depth fair partition of ``poly`` (no final verification)."""
    if depth == 1:
        return _fair_split(poly)
    if poly.is_centrally_symmetric():
        return _symmetric(poly, depth, budget, theta_samples, phi_samples)
    slicer = make_slicer(poly, depth - 1, budget, theta_samples, phi_samples)
    samples = theta_samples if depth == 2 else phi_samples
    last = None
    for sol in _lazy_solutions(slicer, samples):
        try:
            pieces, tree = _assemble(poly, slicer, sol)
        except SolverError as exc:
            log.debug("%s", exc)
            continue
        rep = validate_partition(poly, pieces)
        if rep.ok(AREA_TOL, PERIMETER_TOL):
            return pieces, tree
        last = rep
        log.debug("solution at theta=%.6f rejected: %s", sol.theta, rep.to_dict())
    raise SolverError(f"no half-turn solution passed verification for N={2 ** depth}"
                      + ("" if last is None else
                         f" (best area spread {last.area_spread:.3g}, perimeter spread {last.perimeter_spread:.3g})"))


def _assemble(poly, slicer, sol):
    if not sol.exact:
        raise SolverError(f"solution near theta={sol.theta:.9f} was not refined")
    pa, ta = slicer.resolve(sol.theta, sol.item_a, sol.p)
    pb, tb = slicer.resolve(sol.theta + math.pi, sol.item_b, sol.p)
    chord = slicer.chord(sol.theta)
    tree = {"cut": "area-bisector", "theta": float(sol.theta), "p": float(sol.p),
            **_chord_record(chord), "children": [ta, tb]}
    return pa + pb, tree


# ---------------------------------------------------------------- slicers

class PartitionSlicer:
    """Fair partitions of ``X(phi)`` into 2^depth pieces, one side of the parent's area bisector.

    Items are the half-turn solutions of the inner slicer on ``X(phi)``.
    Their position is the solution angle measured from ``phi``, over a half
    turn, which barely moves as ``phi`` rotates.
    """

    def __init__(self, parent, depth, side="left", budget=None, theta_samples=THETA_SAMPLES,
                 phi_samples=PHI_SAMPLES, cache_size=4096):
        if depth < 2:
            raise ValueError("PartitionSlicer needs depth >= 2; use FairRangeSlicer for depth 1")
        self.parent = parent
        self.depth = depth
        self.level = depth
        self.offset = 0.0 if side == "left" else math.pi
        self.budget = budget if budget is not None else Budget()
        self.theta_samples = theta_samples
        self.phi_samples = phi_samples
        self._cache = OrderedDict()
        self._cache_size = cache_size

    def chord(self, phi):
        return area_bisector_at(self.parent, phi + self.offset)

    def piece(self, phi):
        return cut_by_chord(self.parent, self.chord(phi))[0]

    def _inner(self, piece):
        return make_slicer(piece, self.depth - 1, self.budget, self.theta_samples, self.phi_samples)

    def items(self, phi):
        hit = self._cache.get(phi)
        if hit is not None:
            self._cache.move_to_end(phi)
            return hit
        inner = self._inner(self.piece(phi))
        samples = self.theta_samples if self.depth == 2 else self.phi_samples
        try:
            sols = _all_solutions(inner, samples)
        except ContinuationError as exc:
            log.warning("inner sweep failed at phi=%.9f: %s", phi, exc)
            sols = []
        items = [SliceItem(((s.theta - phi) / math.pi) % 1.0, 0.0, s.p, s) for s in sols]
        self._cache[phi] = items
        if len(self._cache) > self._cache_size:
            self._cache.popitem(last=False)
        return items

    def track(self, phi, hint, position=None):
        items = self.items(phi)
        if not items:
            return None
        probe = SliceItem(hint.position if position is None else position, 0.0, hint.p)
        return min(items, key=lambda it: (item_distance(it, probe), abs(it.p - hint.p)))

    def resolve(self, phi, item, target_p=None):
        """Assemble the 2^depth pieces of ``X(phi)`` for ``item``."""
        sol = item.payload
        if not sol.exact:
            raise SolverError(f"inner solution near theta={sol.theta:.9f} was not refined")
        inner = self._inner(self.piece(phi))
        pa, ta = inner.resolve(sol.theta, sol.item_a, sol.p)
        pb, tb = inner.resolve(sol.theta + math.pi, sol.item_b, sol.p)
        tree = {"cut": "area-bisector", "theta": float(sol.theta), "p": float(sol.p),
                **_chord_record(inner.chord(sol.theta)), "children": [ta, tb]}
        return pa + pb, tree


def make_slicer(poly, depth, budget=None, theta_samples=THETA_SAMPLES, phi_samples=PHI_SAMPLES):
    """Slicer whose items are 2^depth fair partitions of one half of ``poly``."""
    if depth == 1:
        return FairRangeSlicer(poly, "left", budget)
    return PartitionSlicer(poly, depth, "left", budget, theta_samples, phi_samples)


# ---------------------------------------------------------------- public solvers

def _check_samples(theta_samples, phi_samples):
    if theta_samples < 64 or phi_samples < 64:
        raise ValueError("angle grids need at least 64 samples")


def fair_partition_pow2(poly, k, theta_samples=THETA_SAMPLES, phi_samples=PHI_SAMPLES,
                        max_evaluations=None):
    """Convex fair partition of ``poly`` into 2^k pieces.

    ``max_evaluations`` caps the number of leaf slice evaluations (one fair
    range analysis of one piece each); exceeding it raises BudgetExceeded.
    If no candidate passes verification, or the continuation breaks down,
    the angle grids are doubled once.
    """
    if k < 1:
        raise UnsupportedN(2 ** k if k >= 0 else k)
    _check_samples(theta_samples, phi_samples)
    if k == 1:
        return fair_partition_2(poly)
    budget = Budget(max_evaluations)
    try:
        pieces, tree = _solve(poly, k, budget, theta_samples, phi_samples)
    except (SolverError, ContinuationError) as exc:
        if isinstance(exc, BudgetExceeded):
            raise
        log.info("%s; retrying on a grid twice as fine", exc)
        pieces, tree = _solve(poly, k, budget, 2 * theta_samples, 2 * phi_samples)
    result = _finish(poly, pieces, tree)
    result.residuals["evaluations"] = budget.used
    return result


def fair_partition_4(poly, theta_samples=THETA_SAMPLES, max_evaluations=None):
    """Convex fair partition into 4 pieces by the rotating-bisector scheme."""
    return fair_partition_pow2(poly, 2, theta_samples=theta_samples, max_evaluations=max_evaluations)


def is_power_of_two(n):
    return isinstance(n, (int, np.integer)) and n >= 2 and (n & (n - 1)) == 0


def fair_partition(poly, n, **kwargs):
    """Dispatch on the piece count ``n`` (2, 4, 8, ...)."""
    if not is_power_of_two(n):
        raise UnsupportedN(n)
    return fair_partition_pow2(poly, int(n).bit_length() - 1, **kwargs)


# ---------------------------------------------------------------- baseline

def naive_recursive_4(poly):
    """Fair-bisect, then fair-bisect each half independently.

    Returns ``(result, gap)`` where ``gap`` is the difference between the two
    pairs' common perimeters relative to their mean. Areas come out equal;
    the perimeters of the two pairs generally do not.
    """
    top, tree = _fair_split(poly)
    pieces, kids = [], []
    for half in top:
        sub, t = _fair_split(half)
        pieces += sub
        kids.append(t)
    tree["children"] = kids
    pa = 0.5 * (pieces[0].perimeter + pieces[1].perimeter)
    pb = 0.5 * (pieces[2].perimeter + pieces[3].perimeter)
    gap = abs(pa - pb) / (0.5 * (pa + pb))
    return _finish(poly, pieces, tree), gap
