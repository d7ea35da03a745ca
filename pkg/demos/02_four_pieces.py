"""
Four pieces of equal area and perimeter
=======================================

Rotate the area bisector of the polygon through a full turn. For each angle
the left half has an odd number of fair bisectors, and their common child
perimeters trace a closed graph over the angle. Where the graph meets its
own copy shifted by half a turn, the two halves can be fair-bisected into
pieces with the same perimeter: four pieces in total.
"""

from fairpart import fair_partition, perimeter_graph, spanning_component, phase_intersections
from fairpart.cli import random_convex_polygon

P = random_convex_polygon(7, 6)
print("polygon:", len(P), "vertices, area", round(P.area, 6), "perimeter", round(P.perimeter, 6))

# the graph of child perimeters for the left half
G = perimeter_graph(P)
print("graph invariants:", G.invariants())

# the component that wraps once around the angle circle meets its shifted copy
curve = spanning_component(G)
hits = phase_intersections(curve)
print(len(hits), "crossings with the half-turn shift, first at theta =", round(hits[0].theta, 6))

result = fair_partition(P, 4)
print("areas     ", [round(a, 9) for a in result.report.areas])
print("perimeters", [round(p, 9) for p in result.report.perimeters])
print("spreads   ", result.report.area_spread, result.report.perimeter_spread)
