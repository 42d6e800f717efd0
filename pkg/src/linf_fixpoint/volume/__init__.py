"""Exact volume engine: hyperplane arrangements, polytope volumes,
pyramid intersections, Monte-Carlo cross-checks, and the oracles the
solver layers consume."""

from .arrangement import Cell, CellDecomposition, build_arrangement, worker_count
from .cells import PlaneRegistry, TrackedCell
from .exact import (
    interval_of,
    pyramid_intersection_volume,
    search_space_volume,
    space_and_pyramid_volumes,
)
from .hyperplanes import (
    Hyperplane,
    dedupe_canonical,
    pyramid_bounding_hyperplanes,
    pyramid_halfspaces,
)
from .montecarlo import MCEstimate, monte_carlo_volume
from .oracle import (
    CachedVolumeOracle,
    ExactVolumeOracle,
    VolumeOracle,
    default_oracle,
)
from .polytope import HPolytope, polytope_volume

__all__ = [
    "Cell",
    "CellDecomposition",
    "CachedVolumeOracle",
    "ExactVolumeOracle",
    "HPolytope",
    "Hyperplane",
    "MCEstimate",
    "PlaneRegistry",
    "TrackedCell",
    "VolumeOracle",
    "build_arrangement",
    "dedupe_canonical",
    "default_oracle",
    "interval_of",
    "monte_carlo_volume",
    "polytope_volume",
    "pyramid_bounding_hyperplanes",
    "pyramid_halfspaces",
    "pyramid_intersection_volume",
    "search_space_volume",
    "space_and_pyramid_volumes",
    "worker_count",
]
