"""
Command-line front end.

    fairpart partition --n 4 --in square.json --out result.json --svg result.svg
    fairpart alpha --in tri.json --out alpha.json
    fairpart curve --in tri.json --out graph.json
    fairpart ensemble --count 100 --vertices 3..12 --n 2 --seed 7 --out ens.json

Polygons are JSON: ``{"vertices": [[x, y], ...]}`` or a bare list of pairs.
Exit codes: 0 success, 1 bad input or unsupported N, 2 solver or verification failure.
Set FAIRPART_LOG=DEBUG (or INFO, ...) for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .bisect import alpha_profile, fair_ranges, range_chord
from .curves import ContinuationError, perimeter_graph, phase_intersections, spanning_component
from .geom import GeometryError, Polygon, read_polygon
from .partition import (
    AREA_TOL,
    PERIMETER_TOL,
    PHI_SAMPLES,
    THETA_SAMPLES,
    SolverError,
    UnsupportedN,
    fair_partition,
    is_power_of_two,
)

log = logging.getLogger("fairpart")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOLVER = 2


# ---------------------------------------------------------------- generator

def random_convex_polygon(seed, n_vertices):
    """Strictly convex polygon with exactly ``n_vertices`` vertices and unit diameter.

    Random edge vectors are centred so they sum to zero, sorted by angle and
    chained. Deterministic for a given ``seed`` (an int or a sequence of ints).
    """
    if n_vertices < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    rng = np.random.default_rng(seed)
    while True:
        v = rng.normal(size=(n_vertices, 2))
        v -= v.mean(axis=0)
        ang = np.arctan2(v[:, 1], v[:, 0])
        v = v[np.argsort(ang)]
        pts = np.cumsum(v, axis=0)
        try:
            poly = Polygon(pts)
        except GeometryError:
            continue
        if len(poly) != n_vertices:
            continue
        # reject nearly flat corners so the vertex count is robust
        w = np.roll(v, -1, axis=0)
        turns = (v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]) / (
            np.linalg.norm(v, axis=1) * np.linalg.norm(w, axis=1))
        if np.min(turns) < 1e-6:
            continue
        c = np.asarray(poly.centroid)
        xs = (np.asarray(poly.xs) - c[0]) / poly.scale
        ys = (np.asarray(poly.ys) - c[1]) / poly.scale
        return Polygon(np.column_stack([xs, ys]))


# ---------------------------------------------------------------- output

def _clean(obj):
    """Plain JSON types (numpy scalars and arrays become floats and lists)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def dumps(obj):
    # json uses repr() for floats: the shortest string that round-trips exactly
    return json.dumps(_clean(obj)) + "\n"


def write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


PALETTE = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69",
           "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f"]


def _fmt(v):
    text = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _pts(xs, ys):
    return " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in zip(xs, ys))


def render_svg(parent, pieces=(), chords=(), labels=()):
    """SVG text of ``parent`` with optional filled pieces, chord segments and labels.

    ``labels`` is a list of ``(x, y, [line, ...])``. Output depends only on
    the inputs, element order included.
    """
    xs, ys = np.asarray(parent.xs), np.asarray(parent.ys)
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(-ys.max()), float(-ys.min())
    m = 0.05 * max(x1 - x0, y1 - y0)
    w, h = x1 - x0 + 2 * m, y1 - y0 + 2 * m
    sw = 0.004 * max(w, h)
    fs = 0.03 * max(w, h)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0 - m)} {_fmt(y0 - m)} '
           f'{_fmt(w)} {_fmt(h)}" width="600" height="{_fmt(600 * h / w)}">']
    for i, p in enumerate(pieces):
        out.append(f'<polygon points="{_pts(p.xs, p.ys)}" fill="{PALETTE[i % len(PALETTE)]}" '
                   f'stroke="#333" stroke-width="{_fmt(sw / 2)}"/>')
    out.append(f'<polygon points="{_pts(xs, ys)}" fill="none" stroke="#000" stroke-width="{_fmt(sw)}"/>')
    for (ax, ay), (bx, by) in chords:
        out.append(f'<line x1="{_fmt(ax)}" y1="{_fmt(-ay)}" x2="{_fmt(bx)}" y2="{_fmt(-by)}" '
                   f'stroke="#c00" stroke-width="{_fmt(sw)}"/>')
    for x, y, lines in labels:
        out.append(f'<text x="{_fmt(x)}" y="{_fmt(-y)}" font-size="{_fmt(fs)}" text-anchor="middle">')
        for k, line in enumerate(lines):
            dy = "0" if k == 0 else _fmt(1.2 * fs)
            out.append(f'<tspan x="{_fmt(x)}" dy="{dy}">{line}</tspan>')
        out.append("</text>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _tree_chords(tree):
    out = []
    if "points" in tree and "reflected_through" not in tree:
        out.append(tuple(tuple(p) for p in tree["points"]))
    for child in tree.get("children", []):
        if "piece" not in child:
            sub = _tree_chords(child)
            if "reflected_through" in child:
                cx, cy = child["reflected_through"]
                sub = [((2 * cx - a[0], 2 * cy - a[1]), (2 * cx - b[0], 2 * cy - b[1])) for a, b in sub]
                if "points" in child:
                    a, b = child["points"]
                    sub.insert(0, ((2 * cx - a[0], 2 * cy - a[1]), (2 * cx - b[0], 2 * cy - b[1])))
            out += sub
    return out


def partition_svg(parent, result):
    labels = []
    for p in result.pieces:
        cx, cy = p.centroid
        labels.append((cx, cy, [f"A={p.area:.6g}", f"P={p.perimeter:.6g}"]))
    return render_svg(parent, result.pieces, _tree_chords(result.cut_tree), labels)


# ---------------------------------------------------------------- config

@dataclass
class RunConfig:
    n: int = 2
    theta_samples: int = THETA_SAMPLES
    phi_samples: int = PHI_SAMPLES
    area_tol: float = AREA_TOL
    perimeter_tol: float = PERIMETER_TOL
    seed: int = 0
    out: Optional[str] = None
    svg: Optional[str] = None

    def __post_init__(self):
        if not is_power_of_two(self.n):
            raise UnsupportedN(self.n)
        if self.theta_samples < 64 or self.phi_samples < 64:
            raise ValueError("angle grids need at least 64 samples")


@dataclass
class EnsembleReport:
    config: dict
    outcomes: list = field(default_factory=list)

    @property
    def success_rate(self):
        return sum(o["success"] for o in self.outcomes) / len(self.outcomes) if self.outcomes else 0.0

    @property
    def parity_violations(self):
        return sum(o["proper_ranges"] % 2 == 0 for o in self.outcomes)

    def _percentiles(self, key):
        vals = [o[key] for o in self.outcomes if o.get(key) is not None]
        if not vals:
            return None
        q = np.percentile(vals, [50, 90, 100])
        return {"p50": float(q[0]), "p90": float(q[1]), "max": float(q[2])}

    def to_json(self):
        return {
            "config": self.config,
            "outcomes": self.outcomes,
            "aggregates": {
                "count": len(self.outcomes),
                "success_rate": self.success_rate,
                "parity_violations": self.parity_violations,
                "area_spread": self._percentiles("area_spread"),
                "perimeter_spread": self._percentiles("perimeter_spread"),
            },
        }


# ---------------------------------------------------------------- commands

def _solve(poly, cfg):
    return fair_partition(poly, cfg.n, theta_samples=cfg.theta_samples, phi_samples=cfg.phi_samples)


def cmd_partition(args):
    cfg = RunConfig(n=args.n, theta_samples=args.theta_samples, phi_samples=args.phi_samples,
                    area_tol=args.tol if args.tol is not None else AREA_TOL,
                    perimeter_tol=args.tol if args.tol is not None else PERIMETER_TOL,
                    out=args.out, svg=args.svg)
    poly = read_polygon(args.input)
    try:
        result = _solve(poly, cfg)
    except (SolverError, ContinuationError) as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    write_text(cfg.out, dumps(result.to_json()))
    if cfg.svg:
        write_text(cfg.svg, partition_svg(poly, result))
    if not result.report.ok(cfg.area_tol, cfg.perimeter_tol):
        rep = result.report
        print(f"error: verification failed (area spread {rep.area_spread:.3g}, perimeter spread "
              f"{rep.perimeter_spread:.3g}, convex {rep.all_convex}, tiles {rep.tiles_parent})",
              file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_alpha(args):
    poly = read_polygon(args.input)
    prof = alpha_profile(poly)
    ranges = fair_ranges(poly, prof)
    bisectors = []
    for r in ranges:
        ch, p = range_chord(poly, r)
        bisectors.append({"chord": [ch.s_start, ch.s_end], "points": [list(ch.start), list(ch.end)],
                          "p": p, "proper": r.proper})
    doc = {"perimeter": poly.perimeter, "profile": prof.to_json(),
           "fair_ranges": [r.to_json() for r in ranges], "fair_bisectors": bisectors}
    write_text(args.out, dumps(doc))
    if args.svg:
        chords = [tuple(tuple(pt) for pt in b["points"]) for b in bisectors]
        write_text(args.svg, render_svg(poly, chords=chords))
    return EXIT_OK


def cmd_curve(args):
    poly = read_polygon(args.input)
    try:
        G = perimeter_graph(poly, args.side, args.theta_samples)
        doc = G.to_json()
        doc["invariants"] = G.invariants()
        curve = spanning_component(G)
        doc["spanning_curve"] = curve.to_json()
        doc["intersections"] = [[r.theta, r.p] for r in phase_intersections(curve)]
    except ContinuationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    write_text(args.out, dumps(doc))
    return EXIT_OK


def _ensemble_one(job):
    index, seed, n_vertices, cfg, timing = job
    poly = random_convex_polygon([seed, index], n_vertices)
    t0 = time.perf_counter()
    proper = sum(r.proper for r in fair_ranges(poly))
    out = {"index": index, "vertices": n_vertices, "proper_ranges": proper,
           "success": False, "area_spread": None, "perimeter_spread": None, "error": None}
    try:
        res = _solve(poly, cfg)
        out["area_spread"] = res.report.area_spread
        out["perimeter_spread"] = res.report.perimeter_spread
        out["success"] = bool(res.report.ok(cfg.area_tol, cfg.perimeter_tol))
    except (SolverError, ContinuationError) as exc:
        out["error"] = str(exc)
    if timing:
        out["runtime"] = time.perf_counter() - t0
    return out


def _vertex_range(text):
    lo, sep, hi = text.partition("..")
    lo, hi = int(lo), int(hi if sep else lo)
    if lo < 3 or hi < lo:
        raise argparse.ArgumentTypeError("vertex range must look like LO..HI with 3 <= LO <= HI")
    return lo, hi


def cmd_ensemble(args):
    cfg = RunConfig(n=args.n, theta_samples=args.theta_samples, phi_samples=args.phi_samples,
                    area_tol=args.tol if args.tol is not None else AREA_TOL,
                    perimeter_tol=args.tol if args.tol is not None else PERIMETER_TOL,
                    seed=args.seed, out=args.out)
    lo, hi = args.vertices
    jobs = [(i, cfg.seed, lo + i % (hi - lo + 1), cfg, args.timing) for i in range(args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_ensemble_one, jobs))
    else:
        outcomes = [_ensemble_one(j) for j in jobs]
    conf = {k: v for k, v in asdict(cfg).items() if k not in ("out", "svg")}
    conf.update(count=args.count, vertices=[lo, hi])
    report = EnsembleReport(conf, outcomes)
    write_text(cfg.out, dumps(report.to_json()))
    ok = report.parity_violations == 0 and report.success_rate == 1.0
    if not ok:
        print(f"ensemble: success rate {report.success_rate:.3f}, "
              f"parity violations {report.parity_violations}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_SOLVER


def build_parser():
    ap = argparse.ArgumentParser(prog="fairpart",
                                 description="Convex partitions into pieces of equal area and perimeter.")
    sub = ap.add_subparsers(dest="command", required=True)

    def grids(p):
        p.add_argument("--theta-samples", type=int, default=THETA_SAMPLES,
                       help="angle grid for the innermost sweep (default %(default)s)")
        p.add_argument("--phi-samples", type=int, default=PHI_SAMPLES,
                       help="angle grid for outer sweeps, N >= 8 (default %(default)s)")
        p.add_argument("--tol", type=float, default=None,
                       help="relative spread tolerance for verification "
                            f"(default {AREA_TOL:g} area, {PERIMETER_TOL:g} perimeter)")

    p = sub.add_parser("partition", help="fair partition of one polygon")
    p.add_argument("--n", type=int, required=True, help="number of pieces (a power of two)")
    p.add_argument("--in", dest="input", required=True, help="polygon JSON")
    p.add_argument("--out", required=True, help="result JSON")
    p.add_argument("--svg", help="optional SVG drawing")
    grids(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("alpha", help="area-difference profile and fair ranges")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("curve", help="perimeter graph of one half under a rotating bisector")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--theta-samples", type=int, default=THETA_SAMPLES)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("ensemble", help="solve and check many random polygons")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--vertices", type=_vertex_range, default=(3, 12), help="LO..HI (default 3..12)")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--timing", action="store_true", help="record per-polygon runtimes (output no longer reproducible)")
    grids(p)
    p.set_defaults(func=cmd_ensemble)
    return ap


def _setup_logging():
    level = os.environ.get("FAIRPART_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UnsupportedN, GeometryError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
