"""Volume oracles consumed by the centerpoint and solver layers.

The algorithms upstream only ever ask two questions: the volume of a
search space, and the volume of its intersection with one axis pyramid.
Both oracles here answer exactly; they differ in cost.

ExactVolumeOracle rebuilds a full arrangement per query.  It is the
reference implementation and the audit path behind --no-cache.

CachedVolumeOracle maintains, per search space, a decomposition of the
space into disjoint convex cells, built incrementally as cuts accumulate
(a space extends its parent's cell list, so one solver run reuses nearly
everything).  Pyramid queries clip only the cells near the pyramid,
after a bounding-box prefilter, and results are memoised by cut list and
pyramid.  Answers are identical to the reference path; only speed
differs.  Cache entries are idempotent exact values, so concurrent
readers at worst recompute one.
"""

from __future__ import annotations

from typing import Protocol, Sequence

from ..geometry import Pyramid, RatVec, SearchSpace
from ..rational import ZERO, Rat
from .cells import (
    PlaneRegistry,
    TrackedCell,
    intersection_volume,
    subtract_halfspace_intersection,
)
from .exact import interval_of, space_and_pyramid_volumes
from .hyperplanes import pyramid_halfspaces


class VolumeOracle(Protocol):
    """Exact volume answers for a search space and its pyramid slices."""

    def space_volume(self, space: SearchSpace) -> Rat: ...

    def pyramid_volume(self, space: SearchSpace, pyramid: Pyramid) -> Rat: ...


class ExactVolumeOracle:
    """Stateless reference oracle; every query rebuilds an arrangement."""

    def space_volume(self, space: SearchSpace) -> Rat:
        total, _, _ = space_and_pyramid_volumes(space, ())
        return total

    def pyramid_volume(self, space: SearchSpace, pyramid: Pyramid) -> Rat:
        _, per, _ = space_and_pyramid_volumes(space, (pyramid,))
        return per[0]


class CachedVolumeOracle:
    """Incremental cell decompositions plus query memoisation."""

    def __init__(self) -> None:
        self._registries: dict[int, PlaneRegistry] = {}
        self._cells: dict[tuple[int, tuple[Pyramid, ...]], list[TrackedCell]] = {}
        self._space_vol: dict[tuple[int, tuple[Pyramid, ...]], Rat] = {}
        self._pyramid_vol: dict[
            tuple[int, tuple[Pyramid, ...], Pyramid], Rat
        ] = {}
        self._oriented: dict[tuple[int, Pyramid], list[tuple[int, int]]] = {}
        self.stats = {"space_queries": 0, "pyramid_queries": 0, "memo_hits": 0}

    def _registry(self, d: int) -> PlaneRegistry:
        reg = self._registries.get(d)
        if reg is None:
            reg = PlaneRegistry(d)
            self._registries[d] = reg
        return reg

    def _oriented_planes(self, pyramid: Pyramid) -> list[tuple[int, int]]:
        key = (pyramid.dimension, pyramid)
        got = self._oriented.get(key)
        if got is None:
            reg = self._registry(pyramid.dimension)
            got = [
                (reg.register(plane), side)
                for plane, side in pyramid_halfspaces(pyramid)
            ]
            self._oriented[key] = got
        return got

    def _cell_list(self, space: SearchSpace) -> list[TrackedCell]:
        key = (space.d, space.cuts)
        cells = self._cells.get(key)
        if cells is not None:
            return cells
        # walk back to the deepest cached ancestor, then extend forward
        depth = len(space.cuts)
        base = -1
        base_cells: list[TrackedCell] | None = None
        for k in range(depth - 1, -1, -1):
            got = self._cells.get((space.d, space.cuts[:k]))
            if got is not None:
                base, base_cells = k, got
                break
        if base_cells is None:
            base = 0
            base_cells = [TrackedCell.unit_cube(self._registry(space.d))]
            self._cells[(space.d, ())] = base_cells
        cells = base_cells
        for k in range(base, depth):
            cut = space.cuts[k]
            cells = subtract_halfspace_intersection(
                cells, self._oriented_planes(cut)
            )
            self._cells[(space.d, space.cuts[: k + 1])] = cells
        return cells

    def space_volume(self, space: SearchSpace) -> Rat:
        self.stats["space_queries"] += 1
        key = (space.d, space.cuts)
        got = self._space_vol.get(key)
        if got is not None:
            self.stats["memo_hits"] += 1
            return got
        if space.d == 1:
            lo, hi = interval_of(space)
            vol = hi - lo if hi > lo else ZERO
        else:
            vol = sum((c.volume() for c in self._cell_list(space)), start=ZERO)
        self._space_vol[key] = vol
        return vol

    def pyramid_volume(self, space: SearchSpace, pyramid: Pyramid) -> Rat:
        self.stats["pyramid_queries"] += 1
        key = (space.d, space.cuts, pyramid)
        got = self._pyramid_vol.get(key)
        if got is not None:
            self.stats["memo_hits"] += 1
            return got
        if space.d == 1:
            from .exact import _interval_pyramid_volume

            vol = _interval_pyramid_volume(space, pyramid)
        else:
            vol = intersection_volume(
                self._cell_list(space), self._oriented_planes(pyramid)
            )
        self._pyramid_vol[key] = vol
        return vol


def default_oracle(cached: bool = True) -> VolumeOracle:
    return CachedVolumeOracle() if cached else ExactVolumeOracle()
