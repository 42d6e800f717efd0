"""Exact volumes of search spaces and their pyramid intersections.

The reference path builds one hyperplane arrangement from all cut and
query pyramids, then classifies every cell by an interior witness: a
cell lies inside a pyramid exactly when its witness does, because cells
never straddle a bounding plane.  Summing cell volumes gives exact
rational answers.  Dimension 1 bypasses the arrangement: there a search
space is always an interval and pyramids are halflines.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import DimensionMismatchError
from ..geometry import Pyramid, RatVec, SearchSpace
from ..rational import ONE, ZERO, Rat, rat_max, rat_min
from .arrangement import CellDecomposition, build_arrangement
from .hyperplanes import Hyperplane, pyramid_bounding_hyperplanes


def interval_of(space: SearchSpace) -> tuple[Rat, Rat]:
    """The surviving interval [lo, hi] of a 1-dimensional search space.

    Negative-sign cuts remove points at or below their apex, positive
    cuts points at or above; hi may fall below lo when nothing is left.
    """
    if space.d != 1:
        raise DimensionMismatchError("interval_of expects a 1-dimensional space")
    lo, hi = ZERO, ONE
    for p in space.cuts:
        if p.sign < 0:
            lo = rat_max(lo, p.apex[0])
        else:
            hi = rat_min(hi, p.apex[0])
    return lo, hi


def _interval_pyramid_volume(space: SearchSpace, pyramid: Pyramid) -> Rat:
    lo, hi = interval_of(space)
    if pyramid.sign < 0:
        hi = rat_min(hi, pyramid.apex[0])
    else:
        lo = rat_max(lo, pyramid.apex[0])
    return hi - lo if hi > lo else ZERO


def space_planes(space: SearchSpace) -> list[Hyperplane]:
    planes: list[Hyperplane] = []
    for cut in space.cuts:
        planes.extend(pyramid_bounding_hyperplanes(cut))
    return planes


def space_and_pyramid_volumes(
    space: SearchSpace, pyramids: Sequence[Pyramid]
) -> tuple[Rat, list[Rat], CellDecomposition | None]:
    """Volume of the space and of its intersection with each pyramid.

    One arrangement serves every query; the decomposition is returned
    for callers that want to inspect or dump it (None in dimension 1).
    """
    for p in pyramids:
        if p.dimension != space.d:
            raise DimensionMismatchError("query pyramid dimension differs from space")
    if space.d == 1:
        lo, hi = interval_of(space)
        vol = hi - lo if hi > lo else ZERO
        per = [_interval_pyramid_volume(space, p) for p in pyramids]
        return vol, per, None
    planes = space_planes(space)
    for p in pyramids:
        planes.extend(pyramid_bounding_hyperplanes(p))
    decomp = build_arrangement(planes, space.d)
    decomp.compute_volumes()
    total = ZERO
    per = [ZERO] * len(pyramids)
    for cell in decomp.cells:
        w = cell.witness()
        if any(cut.contains(w) for cut in space.cuts):
            continue
        v = cell.volume()
        total += v
        for k, p in enumerate(pyramids):
            if p.contains(w):
                per[k] += v
    return total, per, decomp


def search_space_volume(space: SearchSpace) -> Rat:
    """Exact volume of the part of the cube not removed by any cut."""
    total, _, _ = space_and_pyramid_volumes(space, ())
    return total


def pyramid_intersection_volume(space: SearchSpace, pyramid: Pyramid) -> Rat:
    """Exact volume of the space's intersection with one pyramid."""
    _, per, _ = space_and_pyramid_volumes(space, (pyramid,))
    return per[0]
