"""qrulesim: stochastic collapse of wave functions along backward light cones.

The simulator propagates conic wave functions, drives state reductions
by probability current, and enforces the non-penetration frontier in
1+1 Minkowski space.
"""

from .geometry import (
    BackwardCone,
    CausalViolation,
    ClippedCone,
    Event,
    Frontier,
    InvalidVelocity,
    NoIntersection,
    Worldline,
    boost,
    cone_intersect_worldline,
    cone_time,
    frontier_insert,
    on_cone,
)

__version__ = "0.1.0"

__all__ = [
    "BackwardCone",
    "CausalViolation",
    "ClippedCone",
    "Event",
    "Frontier",
    "InvalidVelocity",
    "NoIntersection",
    "Worldline",
    "boost",
    "cone_intersect_worldline",
    "cone_time",
    "frontier_insert",
    "on_cone",
    "__version__",
]
