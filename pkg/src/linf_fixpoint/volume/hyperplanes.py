"""Sparse rational hyperplanes bounding axis pyramids.

Every hyperplane arising from a pyramid cut has the form
+-y_i +- y_j = r, so coefficients are integers in {-1, 0, +1} with at
most two nonzero entries (cube facets use a single entry).  A canonical
orientation (first nonzero coefficient positive) makes equal planes
compare and hash equal regardless of how they were produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DimensionMismatchError
from ..geometry import Pyramid, RatVec
from ..rational import Rat, rat


@dataclass(frozen=True, slots=True)
class Hyperplane:
    """The equation coeffs . y = offset, with sparse small-integer coeffs."""

    coeffs: tuple[int, ...]
    offset: Rat

    def __post_init__(self) -> None:
        if all(c == 0 for c in self.coeffs):
            raise ValueError("hyperplane needs a nonzero coefficient")

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, c) for i, c in enumerate(self.coeffs) if c != 0)

    def evaluate(self, y: RatVec) -> Rat:
        """coeffs . y - offset; zero exactly on the plane."""
        if len(y) != len(self.coeffs):
            raise DimensionMismatchError("point dimension differs from hyperplane")
        total = -self.offset
        for i, c in self.terms:
            total += y[i] if c == 1 else -y[i] if c == -1 else c * y[i]
        return total

    def canonical(self) -> "Hyperplane":
        """Scale so the coefficients are coprime and the first is positive.

        Two hyperplanes describe the same point set exactly when their
        canonical forms are equal, which is what deduplication keys on.
        """
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, abs(c))
        first = next(c for c in self.coeffs if c != 0)
        scale = g if first > 0 else -g
        if scale == 1:
            return self
        return Hyperplane(
            tuple(c // scale for c in self.coeffs), self.offset / scale
        )


def axis_plane(d: int, axis: int, value: Rat) -> Hyperplane:
    """The plane y_axis = value."""
    coeffs = tuple(1 if i == axis else 0 for i in range(d))
    return Hyperplane(coeffs, rat(value))


def pyramid_halfspaces(pyramid: Pyramid) -> list[tuple[Hyperplane, int]]:
    """Oriented bounding halfspaces of a pyramid.

    Each entry is (plane, side) with the pyramid contained in
    {y : side * (coeffs . y - offset) >= 0}.  The pyramid with apex x,
    axis i and sign s is exactly the intersection of
    s*(y_i - x_i) >= +-(y_j - x_j) over the other axes j, giving
    2(d-1) halfspaces; in dimension 1 the pyramid is the halfline
    s*(y - x) >= 0.
    """
    x = pyramid.apex
    d = len(x)
    i, s = pyramid.axis, pyramid.sign
    out: list[tuple[Hyperplane, int]] = []
    if d == 1:
        plane = axis_plane(1, 0, x[0])
        out.append((plane, s))
        return out
    for j in range(d):
        if j == i:
            continue
        for t in (1, -1):
            coeffs = [0] * d
            coeffs[i] = s
            coeffs[j] = -t
            offset = s * x[i] - t * x[j]
            plane = Hyperplane(tuple(coeffs), offset).canonical()
            raw = Hyperplane(tuple(coeffs), offset)
            side = 1 if raw.coeffs == plane.coeffs else -1
            out.append((plane, side))
    return out


def pyramid_bounding_hyperplanes(pyramid: Pyramid) -> list[Hyperplane]:
    """The 2(d-1) canonical planes bounding a pyramid (empty in d=1)."""
    if pyramid.dimension == 1:
        return []
    return [plane for plane, _ in pyramid_halfspaces(pyramid)]


def dedupe_canonical(planes: list[Hyperplane]) -> list[Hyperplane]:
    """Canonicalise and drop duplicates, preserving first-seen order."""
    seen: set[tuple[tuple[int, ...], Rat]] = set()
    out: list[Hyperplane] = []
    for plane in planes:
        c = plane.canonical()
        key = (c.coeffs, c.offset)
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out
