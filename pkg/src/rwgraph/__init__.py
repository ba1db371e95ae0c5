"""Moments of distance-cumulative properties on randomly weighted graphs."""

from .errors import GuardError, RWGraphError, TooLarge, ValidationError
from .fpras import ApproxResult, boost, estimate_moment, estimate_moment_boosted
from .graph import (
    BCWEdge,
    BCWGraph,
    Instance,
    Phase,
    RWEdge,
    RWGraph,
    WeightedGraph,
    normalize,
    validate,
)
from .oracle import exact_distribution
from .properties import PropertyKind, evaluate
from .transform import rw_to_bcw

__all__ = [
    "ApproxResult",
    "BCWEdge",
    "BCWGraph",
    "GuardError",
    "Instance",
    "Phase",
    "PropertyKind",
    "RWEdge",
    "RWGraph",
    "RWGraphError",
    "TooLarge",
    "ValidationError",
    "WeightedGraph",
    "boost",
    "estimate_moment",
    "estimate_moment_boosted",
    "evaluate",
    "exact_distribution",
    "normalize",
    "rw_to_bcw",
    "validate",
]
