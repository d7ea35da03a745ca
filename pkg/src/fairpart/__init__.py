"""Convex partitions of convex polygons into 2^k pieces of equal area and equal perimeter."""

from .bisect import FairRange, alpha, alpha_profile, fair_bisectors, fair_ranges
from .curves import (
    ContinuationError,
    PerimeterGraph,
    PeriodicCurve,
    perimeter_graph,
    phase_intersections,
    spanning_component,
)
from .geom import (
    Chord,
    GeometryError,
    NonConvexError,
    PartitionReport,
    Polygon,
    cut_by_chord,
    read_polygon,
    regular_polygon,
    validate_partition,
)
from .partition import (
    FairPartitionResult,
    SolverError,
    UnsupportedN,
    fair_partition,
    fair_partition_2,
    fair_partition_4,
    fair_partition_pow2,
    naive_recursive_4,
)

__version__ = "0.1.0"
