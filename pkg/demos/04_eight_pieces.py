"""
Eight pieces
============

For eight pieces the same rotation argument is applied one level up: each
half of the rotating area bisector is itself split into four fair pieces,
and the angle is chosen where both halves reach the same piece perimeter.
This takes a couple of minutes.
"""

import math
import time

from fairpart import fair_partition
from fairpart.cli import partition_svg, write_text
from fairpart.geom import Polygon

tri = Polygon([(0, 0), (2, 0), (1, math.sqrt(3))])
t0 = time.perf_counter()
result = fair_partition(tri, 8)
print(f"{len(result.pieces)} pieces in {time.perf_counter() - t0:.0f}s")
print("area spread %.1e, perimeter spread %.1e" % (result.report.area_spread, result.report.perimeter_spread))

write_text("eight_pieces.svg", partition_svg(tri, result))
print("drawing written to eight_pieces.svg")
