"""Approximate fixed points of l-infinity contractions on the unit cube.

The package couples an exact rational geometry kernel (axis pyramids,
halfspace cuts, hyperplane arrangements, polytope volumes) with a
cutting-plane solver that repeatedly queries the map at a centerpoint of
the remaining search space.  A separate composition layer reduces large
problems to square-root-sized blocks.
"""

from .geometry import (
    HalfspaceDir,
    Pyramid,
    RatVec,
    SearchSpace,
    as_vec,
    direction_from_displacement,
    halfspace_decompose,
    linf_dist,
    linf_norm,
    pyramid_contains,
    search_space_cut,
)
from .rational import Rat, rat, rat_decimal, rat_str

__version__ = "0.1.0"

__all__ = [
    "HalfspaceDir",
    "Pyramid",
    "Rat",
    "RatVec",
    "SearchSpace",
    "as_vec",
    "direction_from_displacement",
    "halfspace_decompose",
    "linf_dist",
    "linf_norm",
    "pyramid_contains",
    "rat",
    "rat_decimal",
    "rat_str",
    "search_space_cut",
    "__version__",
]
