"""Exact volume of bounded rational H-polytopes.

A polytope is stored as a list of inequalities a . y <= b.  Vertices are
found by solving the d-by-d equality subsystems and filtering by
feasibility, and volume comes from a star triangulation: cone the vertex
barycenter over a triangulation of each facet, where facets are
triangulated recursively after substituting the facet equation to drop
one coordinate.  Determinants of the resulting simplices need no square
roots, so all volumes are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Sequence

from ..errors import DimensionMismatchError, EmptyInteriorError
from ..geometry import RatVec
from ..rational import ONE, ZERO, Rat, rat

Halfspace = tuple[tuple[Rat, ...], Rat]


def dot(a: Sequence[Rat], y: Sequence[Rat]) -> Rat:
    total = ZERO
    for c, v in zip(a, y):
        if c:
            total += c * v
    return total


def solve_square_system(rows: list[Sequence[Rat]], rhs: list[Rat]) -> RatVec | None:
    """Solve a d-by-d rational linear system; None when singular."""
    d = len(rows)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        if pv != ONE:
            aug[col] = [x / pv for x in aug[col]]
        for r in range(d):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(aug[r][d] for r in range(d))


def determinant(rows: list[Sequence[Rat]]) -> Rat:
    d = len(rows)
    mat = [list(r) for r in rows]
    det = ONE
    for col in range(d):
        pivot = next((r for r in range(col, d) if mat[r][col] != 0), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        pv = mat[col][col]
        det *= pv
        inv_rows = mat[col]
        for r in range(col + 1, d):
            if mat[r][col] != 0:
                factor = mat[r][col] / pv
                mat[r] = [x - factor * y for x, y in zip(mat[r], inv_rows)]
    return det


def barycenter(points: Sequence[RatVec]) -> RatVec:
    n = rat(len(points))
    d = len(points[0])
    return tuple(sum(p[i] for p in points) / n for i in range(d))


@dataclass(frozen=True)
class HPolytope:
    """Intersection of halfspaces a . y <= b in dimension d."""

    d: int
    halfspaces: tuple[Halfspace, ...]

    @classmethod
    def unit_cube(cls, d: int) -> "HPolytope":
        hs: list[Halfspace] = []
        for i in range(d):
            hi = tuple(rat(1) if j == i else ZERO for j in range(d))
            lo = tuple(rat(-1) if j == i else ZERO for j in range(d))
            hs.append((hi, ONE))
            hs.append((lo, ZERO))
        return cls(d, tuple(hs))

    def with_halfspace(self, a: Sequence[Rat], b: Rat) -> "HPolytope":
        return HPolytope(self.d, self.halfspaces + ((tuple(rat(c) for c in a), rat(b)),))

    def contains(self, y: RatVec) -> bool:
        if len(y) != self.d:
            raise DimensionMismatchError("point dimension differs from polytope")
        return all(dot(a, y) <= b for a, b in self.halfspaces)

    @cached_property
    def vertices(self) -> tuple[RatVec, ...]:
        """All vertices, via equality subsystems of d constraints."""
        m = len(self.halfspaces)
        if m < self.d:
            return ()
        found: dict[RatVec, None] = {}
        for combo in combinations(range(m), self.d):
            rows = [self.halfspaces[i][0] for i in combo]
            rhs = [self.halfspaces[i][1] for i in combo]
            point = solve_square_system(rows, rhs)
            if point is not None and self.contains(point):
                found.setdefault(point, None)
        return tuple(found)

    def is_bounded(self) -> bool:
        """Check that the recession cone {a . y <= 0} is trivial."""
        cone = [(a, ZERO) for a, _ in self.halfspaces]
        box = HPolytope.unit_cube(self.d).halfspaces
        shifted: list[Halfspace] = []
        for a, b in box:
            # recentre the unit cube to [-1, 1]^d
            shifted.append((a, ONE))
        probe = HPolytope(self.d, tuple(cone) + tuple(shifted))
        return all(all(c == 0 for c in v) for v in probe.vertices)


def polytope_volume(poly: HPolytope) -> Rat:
    """Exact volume of a bounded H-polytope (zero when not full-dimensional)."""
    if not poly.is_bounded():
        raise EmptyInteriorError("polytope is unbounded; volume undefined")
    verts = poly.vertices
    return volume_from_vertices(list(verts), list(poly.halfspaces), poly.d)


def volume_from_vertices(
    vertices: list[RatVec], halfspaces: list[Halfspace], d: int
) -> Rat:
    """Volume of conv(vertices) given a valid bounding halfspace list."""
    if len(vertices) < d + 1:
        return ZERO
    if d == 1:
        xs = [v[0] for v in vertices]
        return max(xs) - min(xs)
    if d == 2:
        return polygon_area(vertices)
    total = ZERO
    g = barycenter(vertices)
    for simplex in triangulate(vertices, halfspaces, d):
        rows = [tuple(p[i] - simplex[0][i] for i in range(d)) for p in simplex[1:]]
        total += abs(determinant(rows))
    fact = 1
    for k in range(2, d + 1):
        fact *= k
    return total / fact


def triangulate(
    vertices: list[RatVec], halfspaces: list[Halfspace], d: int
) -> list[tuple[RatVec, ...]]:
    """Split a polytope into d-simplices, each a (d+1)-tuple of vertices.

    Simplices are cones from the vertex barycenter over a recursive
    triangulation of each facet; facets are identified by their tight
    vertex sets so duplicated or rescaled halfspaces cannot double-count.
    """
    if len(vertices) < d + 1:
        return []
    if d == 1:
        xs = sorted(vertices, key=lambda v: v[0])
        if xs[0] == xs[-1]:
            return []
        return [(xs[0], xs[-1])]
    if d == 2:
        ring = angular_sort(vertices)
        return [(ring[0], ring[i], ring[i + 1]) for i in range(1, len(ring) - 1)]
    g = barycenter(vertices)
    simplices: list[tuple[RatVec, ...]] = []
    seen: set[frozenset[RatVec]] = set()
    for a, b in halfspaces:
        tight = [v for v in vertices if dot(a, v) == b]
        if len(tight) < d:
            continue
        key = frozenset(tight)
        if key in seen:
            continue
        seen.add(key)
        k = next(i for i, c in enumerate(a) if c != 0)

        def lift(p: RatVec, a=a, b=b, k=k) -> RatVec:
            """Recover the dropped coordinate from the facet equation.

            Recursive triangulations introduce barycenters that are not
            input vertices, so lifting must work for any point of the
            facet plane, not just the projected tight vertices.
            """
            partial = sum(
                c * x for c, x in zip(a[:k] + a[k + 1 :], p)
            )
            missing = (b - partial) / a[k]
            return p[:k] + (missing,) + p[k:]

        sub_vertices = list({_drop(v, k) for v in tight})
        sub_halfspaces: list[Halfspace] = []
        feasible = True
        for c, e in halfspaces:
            factor = c[k] / a[k]
            c2 = tuple(
                c[j] - factor * a[j] for j in range(len(c)) if j != k
            )
            e2 = e - factor * b
            if all(x == 0 for x in c2):
                if e2 < 0:
                    feasible = False
                    break
                continue
            sub_halfspaces.append((c2, e2))
        if not feasible:
            continue
        for facet_simplex in triangulate(sub_vertices, sub_halfspaces, d - 1):
            simplices.append((g,) + tuple(lift(p) for p in facet_simplex))
    return simplices


def _drop(v: RatVec, k: int) -> RatVec:
    return v[:k] + v[k + 1 :]


def angular_sort(points: Sequence[RatVec]) -> list[RatVec]:
    """Order the vertices of a convex planar set counterclockwise.

    Comparison is exact: points are bucketed by half-plane around the
    barycenter and ordered by cross-product sign within each half.
    """
    center = barycenter(list(points))

    def half(p: RatVec) -> int:
        dx, dy = p[0] - center[0], p[1] - center[1]
        if dy > 0 or (dy == 0 and dx > 0):
            return 0
        return 1

    def cross(p: RatVec, q: RatVec) -> Rat:
        px, py = p[0] - center[0], p[1] - center[1]
        qx, qy = q[0] - center[0], q[1] - center[1]
        return px * qy - py * qx

    import functools

    def cmp(p: RatVec, q: RatVec) -> int:
        hp, hq = half(p), half(q)
        if hp != hq:
            return -1 if hp < hq else 1
        c = cross(p, q)
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0

    return sorted(points, key=functools.cmp_to_key(cmp))


def polygon_area(points: Sequence[RatVec]) -> Rat:
    """Exact area of a convex polygon given in any vertex order."""
    if len(points) < 3:
        return ZERO
    ring = angular_sort(points)
    twice = ZERO
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        twice += x1 * y2 - x2 * y1
    return abs(twice) / 2
