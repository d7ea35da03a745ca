"""
Fair bisectors of a triangle
============================

A fair bisector is a chord that halves both the area and the perimeter.
Walking a point s around the boundary and pairing it with the point half
a perimeter ahead gives a chord that always halves the perimeter; the
signed area to its left minus half the total area, alpha(s), is then zero
exactly at the fair bisectors.
"""

import math

from fairpart import alpha, alpha_profile, fair_bisectors, fair_ranges, regular_polygon
from fairpart.geom import Polygon

# an equilateral triangle: its three medians are the fair bisectors
tri = Polygon([(0, 0), (2, 0), (1, math.sqrt(3))])
for chord, p in fair_bisectors(tri):
    print("median from", [round(v, 6) for v in chord.start], "to", [round(v, 6) for v in chord.end],
          "child perimeter", round(p, 6))

# alpha is piecewise quadratic in s; the profile stores the pieces exactly
prof = alpha_profile(tri)
for s in (0.0, 0.5, 1.0, 2.0):
    print(f"alpha({s}) = {prof.value(s):+.6f}  (direct cut: {alpha(tri, s):+.6f})")

# a thin isosceles triangle has only one fair bisector, through the apex
thin = Polygon([(-math.tan(math.radians(10)), 0), (math.tan(math.radians(10)), 0), (0, 1)])
print("thin triangle:", len(fair_ranges(thin)), "fair bisector")

# centrally symmetric shapes: every perimeter-halving chord is fair
hexagon = regular_polygon(6)
print("hexagon whole boundary:", fair_ranges(hexagon)[0].whole_boundary)
