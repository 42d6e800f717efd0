"""Convex cells with exact vertex tracking.

A TrackedCell is a full-dimensional convex polytope inside the unit
cube, stored redundantly as halfspaces (references into a shared plane
registry) plus its vertex set, with each vertex remembering which planes
it lies on.  Clipping against a registered plane then only needs the
vertex values: kept vertices survive, and new vertices appear where the
plane crosses an edge, detected through shared tight planes of the
endpoints.  All coordinates are exact rationals.

Cells are the workhorse of both the hyperplane arrangement and the
incremental search-space decomposition kept by the caching volume
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from ..geometry import RatVec
from ..rational import ONE, ZERO, Rat, rat
from .hyperplanes import Hyperplane
from .polytope import (
    HPolytope,
    angular_sort,
    barycenter,
    determinant,
    dot,
    volume_from_vertices,
)


class PlaneRegistry:
    """Interns canonical hyperplanes so cells can reference them by id."""

    def __init__(self, d: int) -> None:
        self.d = d
        self._planes: list[Hyperplane] = []
        self._terms: list[tuple[tuple[int, int], ...]] = []
        self._index: dict[tuple[tuple[int, ...], Rat], int] = {}

    def register(self, plane: Hyperplane) -> int:
        c = plane.canonical()
        key = (c.coeffs, c.offset)
        pid = self._index.get(key)
        if pid is None:
            pid = len(self._planes)
            self._planes.append(c)
            self._terms.append(c.terms)
            self._index[key] = pid
        return pid

    def plane(self, pid: int) -> Hyperplane:
        return self._planes[pid]

    def evaluate(self, pid: int, y: RatVec) -> Rat:
        total = -self._planes[pid].offset
        for i, coef in self._terms[pid]:
            total += y[i] if coef == 1 else -y[i] if coef == -1 else coef * y[i]
        return total

    def bbox_range(self, pid: int, lo: RatVec, hi: RatVec) -> tuple[Rat, Rat]:
        """Exact min and max of the plane form over an axis box."""
        vmin = -self._planes[pid].offset
        vmax = vmin
        for i, coef in self._terms[pid]:
            if coef > 0:
                vmin += coef * lo[i]
                vmax += coef * hi[i]
            else:
                vmin += coef * hi[i]
                vmax += coef * lo[i]
        return vmin, vmax


@dataclass
class TrackedCell:
    """Full-dimensional convex cell with vertex and incidence tracking.

    `halfspaces` lists (plane id, side) pairs; the cell satisfies
    side * (plane form) >= 0 for each.  `tight[i]` holds the plane ids
    passing through vertex i.
    """

    registry: PlaneRegistry
    halfspaces: tuple[tuple[int, int], ...]
    vertices: tuple[RatVec, ...]
    tight: tuple[frozenset[int], ...]
    _volume: Rat | None = field(default=None, repr=False)
    _bbox: tuple[RatVec, RatVec] | None = field(default=None, repr=False)

    @classmethod
    def unit_cube(cls, registry: PlaneRegistry) -> "TrackedCell":
        d = registry.d
        facet_ids: list[tuple[int, int]] = []
        lo_ids = []
        hi_ids = []
        for i in range(d):
            coeffs = tuple(1 if j == i else 0 for j in range(d))
            lo_pid = registry.register(Hyperplane(coeffs, ZERO))
            hi_pid = registry.register(Hyperplane(coeffs, ONE))
            lo_ids.append(lo_pid)
            hi_ids.append(hi_pid)
            facet_ids.append((lo_pid, 1))
            facet_ids.append((hi_pid, -1))
        verts = []
        tights = []
        for corner in product((ZERO, ONE), repeat=d):
            verts.append(tuple(corner))
            tights.append(
                frozenset(
                    lo_ids[i] if corner[i] == ZERO else hi_ids[i] for i in range(d)
                )
            )
        return cls(registry, tuple(facet_ids), tuple(verts), tuple(tights))

    @property
    def d(self) -> int:
        return self.registry.d

    def bbox(self) -> tuple[RatVec, RatVec]:
        if self._bbox is None:
            d = self.d
            lo = tuple(min(v[i] for v in self.vertices) for i in range(d))
            hi = tuple(max(v[i] for v in self.vertices) for i in range(d))
            self._bbox = (lo, hi)
        return self._bbox

    def barycenter(self) -> RatVec:
        return barycenter(self.vertices)

    def classify_against(self, pid: int, side: int) -> int:
        """Position relative to a halfspace: +1 inside, -1 outside, 0 split.

        Uses the bounding box first, then exact vertex values, so cells
        far from the plane are classified without touching vertices.
        """
        lo, hi = self.bbox()
        vmin, vmax = self.registry.bbox_range(pid, lo, hi)
        if side < 0:
            vmin, vmax = -vmax, -vmin
        if vmin >= 0:
            return 1
        if vmax < 0:
            return -1
        has_pos = False
        has_neg = False
        for v in self.vertices:
            val = side * self.registry.evaluate(pid, v)
            if val > 0:
                has_pos = True
            elif val < 0:
                has_neg = True
            if has_pos and has_neg:
                return 0
        if not has_pos:
            return -1
        return 1 if not has_neg else 0

    def clip(self, pid: int, side: int) -> "TrackedCell | None":
        """Intersect with side * (plane form) >= 0; None when the result
        has empty interior."""
        values = [side * self.registry.evaluate(pid, v) for v in self.vertices]
        if not any(val > 0 for val in values):
            return None
        if all(val >= 0 for val in values):
            if all(val > 0 for val in values):
                return self
            merged: dict[RatVec, set[int]] = {}
            for v, t, val in zip(self.vertices, self.tight, values):
                extra = {pid} if val == 0 else set()
                merged.setdefault(v, set()).update(t | extra)
            return self._rebuild(self.halfspaces + ((pid, side),), merged)
        need = self.d - 1
        merged = {}
        for v, t, val in zip(self.vertices, self.tight, values):
            if val > 0:
                merged.setdefault(v, set()).update(t)
            elif val == 0:
                merged.setdefault(v, set()).update(t | {pid})
        n = len(self.vertices)
        for i in range(n):
            vi = values[i]
            if vi <= 0:
                continue
            for j in range(n):
                vj = values[j]
                if vj >= 0:
                    continue
                common = self.tight[i] & self.tight[j]
                if len(common) < need:
                    continue
                t = vi / (vi - vj)
                point = tuple(
                    a + t * (b - a) for a, b in zip(self.vertices[i], self.vertices[j])
                )
                merged.setdefault(point, set()).update(common | {pid})
        if len(merged) < self.d + 1:
            return None
        return self._rebuild(self.halfspaces + ((pid, side),), merged)

    def _rebuild(
        self, halfspaces: tuple[tuple[int, int], ...], merged: dict[RatVec, set[int]]
    ) -> "TrackedCell":
        verts = tuple(merged)
        tights = tuple(frozenset(merged[v]) for v in verts)
        return TrackedCell(self.registry, halfspaces, verts, tights)

    def split(self, pid: int) -> tuple["TrackedCell | None", "TrackedCell | None"]:
        """Pieces on the negative and positive side of a plane."""
        return self.clip(pid, -1), self.clip(pid, 1)

    def volume(self) -> Rat:
        if self._volume is None:
            self._volume = self._compute_volume()
        return self._volume

    def _compute_volume(self) -> Rat:
        d = self.d
        if d == 1:
            xs = [v[0] for v in self.vertices]
            return max(xs) - min(xs)
        if d == 2:
            ring = angular_sort(self.vertices)
            twice = ZERO
            n = len(ring)
            for i in range(n):
                x1, y1 = ring[i]
                x2, y2 = ring[(i + 1) % n]
                twice += x1 * y2 - x2 * y1
            return abs(twice) / 2
        if d == 3:
            return self._volume_3d()
        hs = [self._leq_form(pid, side) for pid, side in self.halfspaces]
        return volume_from_vertices(list(self.vertices), hs, d)

    def _leq_form(self, pid: int, side: int) -> tuple[tuple[Rat, ...], Rat]:
        plane = self.registry.plane(pid)
        coeffs = tuple(rat(-side * c) for c in plane.coeffs)
        return coeffs, rat(-side) * plane.offset

    def _volume_3d(self) -> Rat:
        """Sum tetrahedra coned from the barycenter over facet fans."""
        g = self.barycenter()
        total = ZERO
        active = {pid for pid, _ in self.halfspaces}
        for pid in active:
            facet = [v for v, t in zip(self.vertices, self.tight) if pid in t]
            if len(facet) < 3:
                continue
            coeffs = self.registry.plane(pid).coeffs
            k = next(i for i, c in enumerate(coeffs) if c != 0)
            flat = [v[:k] + v[k + 1 :] for v in facet]
            order = angular_sort(flat)
            ring = [facet[flat.index(p)] for p in order]
            a0 = ring[0]
            for i in range(1, len(ring) - 1):
                rows = [
                    tuple(ring[i][j] - a0[j] for j in range(3)),
                    tuple(ring[i + 1][j] - a0[j] for j in range(3)),
                    tuple(g[j] - a0[j] for j in range(3)),
                ]
                total += abs(determinant(rows))
        return total / 6

    def to_hpolytope(self) -> HPolytope:
        hs = tuple(self._leq_form(pid, side) for pid, side in self.halfspaces)
        return HPolytope(self.d, hs)

    def contains(self, y: RatVec) -> bool:
        return all(
            side * self.registry.evaluate(pid, y) >= 0 for pid, side in self.halfspaces
        )


def _classify_all(
    cell: TrackedCell, oriented: Sequence[tuple[int, int]]
) -> list[int] | None:
    """Classification per halfspace, or None when some halfspace misses
    the cell entirely (so the intersection misses it too)."""
    kinds: list[int] = []
    for pid, side in oriented:
        kind = cell.classify_against(pid, side)
        if kind < 0:
            return None
        kinds.append(kind)
    return kinds


def subtract_halfspace_intersection(
    cells: Iterable[TrackedCell], oriented: Sequence[tuple[int, int]]
) -> list[TrackedCell]:
    """Remove the intersection of oriented halfspaces from each cell.

    The complement of an intersection H_1 ... H_k splits as the disjoint
    union of (outside H_1), (inside H_1, outside H_2), and so on, which
    keeps the output cells disjoint.
    """
    out: list[TrackedCell] = []
    for cell in cells:
        kinds = _classify_all(cell, oriented)
        if kinds is None:
            out.append(cell)
            continue
        if all(k > 0 for k in kinds):
            continue
        remaining: TrackedCell | None = cell
        for (pid, side), kind in zip(oriented, kinds):
            if remaining is None:
                break
            if kind > 0:
                continue
            piece = remaining.clip(pid, -side)
            if piece is not None:
                out.append(piece)
            remaining = remaining.clip(pid, side)
    return out


def intersection_volume(
    cells: Iterable[TrackedCell], oriented: Sequence[tuple[int, int]]
) -> Rat:
    """Total volume of the cells clipped to an oriented halfspace cone."""
    total = ZERO
    for cell in cells:
        kinds = _classify_all(cell, oriented)
        if kinds is None:
            continue
        if all(k > 0 for k in kinds):
            total += cell.volume()
            continue
        piece: TrackedCell | None = cell
        for (pid, side), kind in zip(oriented, kinds):
            if kind > 0:
                continue
            piece = piece.clip(pid, side)
            if piece is None:
                break
        if piece is not None:
            total += piece.volume()
    return total
