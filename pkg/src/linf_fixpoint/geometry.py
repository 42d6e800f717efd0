"""Exact geometry for the Chebyshev (l-infinity) metric on the unit cube.

The central objects are axis pyramids and the halfspace-like sets they
tile.  For an apex x, axis i and sign s the pyramid

    P(i, s, x) = { y : s * (y_i - x_i) = ||y - x||_inf }

collects the points whose largest coordinate displacement from x is
realised along axis i with sign s.  The 2d pyramids of an apex cover
space and overlap only on measure-zero boundaries.  A halfspace in this
metric is described by a direction sign pattern and decomposes into the
pyramids selected by that pattern; cutting a search space removes such a
decomposition from the unit cube.

Everything here is immutable and exact, safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, ZeroDirectionError
from .rational import ONE, ZERO, Rat, RatLike, rat

RatVec = tuple[Rat, ...]


def as_vec(values: Sequence[RatLike]) -> RatVec:
    """Coerce a sequence of rational-like values into an exact vector."""
    return tuple(rat(v) for v in values)


def _check_same_dimension(a: RatVec, b: RatVec) -> None:
    if len(a) != len(b):
        raise DimensionMismatchError(
            f"vector dimensions differ: {len(a)} vs {len(b)}"
        )


def vec_add(a: RatVec, b: RatVec) -> RatVec:
    _check_same_dimension(a, b)
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: RatVec, b: RatVec) -> RatVec:
    _check_same_dimension(a, b)
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(alpha: Rat, a: RatVec) -> RatVec:
    return tuple(alpha * x for x in a)


def linf_norm(v: RatVec) -> Rat:
    """Chebyshev norm: the largest absolute coordinate."""
    if not v:
        return ZERO
    return max(abs(x) for x in v)


def linf_dist(a: RatVec, b: RatVec) -> Rat:
    return linf_norm(vec_sub(a, b))


def in_unit_cube(y: RatVec) -> bool:
    return all(ZERO <= x <= ONE for x in y)


def clamp_to_unit_cube(y: RatVec) -> RatVec:
    return tuple(ZERO if x < ZERO else ONE if x > ONE else x for x in y)


@dataclass(frozen=True, slots=True)
class Pyramid:
    """Axis pyramid with apex `apex`, axis `axis` (0-based) and sign +-1.

    Contains the points y whose displacement from the apex attains its
    Chebyshev norm along `axis` with the given sign.  The set is closed;
    neighbouring pyramids of one apex share boundary faces.
    """

    axis: int
    sign: int
    apex: RatVec

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1):
            raise ValueError(f"pyramid sign must be +-1, got {self.sign}")
        if not 0 <= self.axis < len(self.apex):
            raise DimensionMismatchError(
                f"pyramid axis {self.axis} out of range for dimension {len(self.apex)}"
            )

    @property
    def dimension(self) -> int:
        return len(self.apex)

    def contains(self, y: RatVec) -> bool:
        if len(y) != len(self.apex):
            raise DimensionMismatchError("point and pyramid apex dimensions differ")
        return self.sign * (y[self.axis] - self.apex[self.axis]) == linf_dist(y, self.apex)


def pyramid_contains(pyramid: Pyramid, y: RatVec) -> bool:
    """Closed membership test, by the defining norm equality."""
    return pyramid.contains(y)


def apex_pyramids(apex: RatVec) -> tuple[Pyramid, ...]:
    """All 2d pyramids of one apex, axis-major with + before -."""
    out = []
    for axis in range(len(apex)):
        out.append(Pyramid(axis, 1, apex))
        out.append(Pyramid(axis, -1, apex))
    return tuple(out)


@dataclass(frozen=True, slots=True)
class HalfspaceDir:
    """Sign pattern of a halfspace direction; entries in {-1, 0, +1}, not all zero.

    Only the signs of a displacement matter for which points move closer
    when stepping against it, so a halfspace is fully described by this
    pattern together with its base point.
    """

    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s not in (-1, 0, 1) for s in self.signs):
            raise ValueError("direction entries must be in {-1, 0, +1}")
        if all(s == 0 for s in self.signs):
            raise ZeroDirectionError("halfspace direction must be nonzero")

    @property
    def dimension(self) -> int:
        return len(self.signs)


def direction_from_displacement(w: RatVec) -> HalfspaceDir:
    """Sign pattern of a nonzero displacement vector."""
    signs = tuple(0 if x == 0 else (1 if x > 0 else -1) for x in w)
    if all(s == 0 for s in signs):
        raise ZeroDirectionError("displacement is zero; no cut direction")
    return HalfspaceDir(signs)


def all_halfspace_directions(d: int) -> tuple[HalfspaceDir, ...]:
    """Every sign pattern in {-1,0,+1}^d except all-zero (3^d - 1 of them)."""
    return tuple(
        HalfspaceDir(signs)
        for signs in product((-1, 0, 1), repeat=d)
        if any(signs)
    )


def halfspace_decompose(direction: HalfspaceDir, x: RatVec) -> tuple[Pyramid, ...]:
    """Pyramids whose union is the halfspace at x in the given direction.

    Axis i contributes its positive pyramid when the direction entry is
    >= 0 and its negative pyramid when it is <= 0; a zero entry
    contributes both.  The result has between d and 2d-1 pyramids.
    """
    if len(x) != direction.dimension:
        raise DimensionMismatchError("base point and direction dimensions differ")
    pyramids = []
    for axis, s in enumerate(direction.signs):
        if s >= 0:
            pyramids.append(Pyramid(axis, 1, x))
        if s <= 0:
            pyramids.append(Pyramid(axis, -1, x))
    return tuple(pyramids)


def halfspace_contains(direction: HalfspaceDir, x: RatVec, y: RatVec) -> bool:
    """Membership in the halfspace at x, via its pyramid decomposition."""
    return any(p.contains(y) for p in halfspace_decompose(direction, x))


@dataclass(frozen=True, slots=True)
class SearchSpace:
    """The unit cube minus a finite union of cut pyramids.

    Cuts accumulate as a tuple, so a space derived by cutting shares its
    parent's prefix; the volume layer keys caches on that structure.
    Membership treats cut pyramids as closed sets, which is the safe
    direction for checking that a fixed point was never discarded.
    """

    d: int
    cuts: tuple[Pyramid, ...] = ()

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DimensionMismatchError("search space dimension must be >= 1")
        for p in self.cuts:
            if p.dimension != self.d:
                raise DimensionMismatchError("cut pyramid dimension differs from space")

    @classmethod
    def unit_cube(cls, d: int) -> "SearchSpace":
        return cls(d=d)

    @property
    def complexity(self) -> int:
        """Number of cut pyramids (the complexity parameter of the space)."""
        return len(self.cuts)

    def contains(self, y: RatVec) -> bool:
        if len(y) != self.d:
            raise DimensionMismatchError("point dimension differs from space")
        if not in_unit_cube(y):
            return False
        return not any(p.contains(y) for p in self.cuts)

    def with_cuts(self, pyramids: Iterable[Pyramid]) -> "SearchSpace":
        fresh = [p for p in pyramids if p not in self.cuts]
        if not fresh:
            return self
        return SearchSpace(self.d, self.cuts + tuple(fresh))


def search_space_cut(space: SearchSpace, x: RatVec, direction: HalfspaceDir) -> SearchSpace:
    """Remove the halfspace at x in the given direction from the space.

    Appends the pyramid decomposition of the halfspace to the cut list,
    growing the complexity by at most 2d-1.
    """
    if len(x) != space.d or direction.dimension != space.d:
        raise DimensionMismatchError("cut point or direction dimension differs from space")
    return space.with_cuts(halfspace_decompose(direction, x))
