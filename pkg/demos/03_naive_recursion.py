"""
Why bisecting twice is not enough
=================================

Fair-bisect a triangle, then fair-bisect each half on its own. All four
areas agree, but the two halves generally end up with different child
perimeters. Rotating the first cut until the two sides agree fixes that.
"""

from fairpart import fair_partition_4, naive_recursive_4
from fairpart.geom import Polygon

T = Polygon([(0, 0), (4, 0), (1, 3)])

naive, gap = naive_recursive_4(T)
print("naive   area spread %.1e  perimeter spread %.1e  (pair gap %.3f)"
      % (naive.report.area_spread, naive.report.perimeter_spread, gap))

fair = fair_partition_4(T)
print("rotated area spread %.1e  perimeter spread %.1e"
      % (fair.report.area_spread, fair.report.perimeter_spread))
