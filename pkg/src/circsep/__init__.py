"""Largest circles separating two sets of planar line segments."""

from .geom import Circle, InvalidInput, Point2, Segment, Tolerance
from .separator import (
    Contact,
    InsufficientSites,
    SeparatingCircle,
    canonical_order,
    find_all_largest,
    find_all_largest_with_info,
)
from .segvor import build_segment_voronoi
from .hierarchy import build_hierarchy, query_curve, query_vertical
from .oracle import gen_equispaced, gen_maxgap, gen_random, oracle_enumerate

__all__ = [
    "Circle",
    "Contact",
    "InsufficientSites",
    "InvalidInput",
    "Point2",
    "SeparatingCircle",
    "Segment",
    "Tolerance",
    "build_hierarchy",
    "build_segment_voronoi",
    "canonical_order",
    "find_all_largest",
    "find_all_largest_with_info",
    "gen_equispaced",
    "gen_maxgap",
    "gen_random",
    "oracle_enumerate",
    "query_curve",
    "query_vertical",
]
