"""Seeded random builders shared by the unit and acceptance tests.

Spaces and pyramids are generated as plain (axis, sign, apex) tuples
over `fractions.Fraction` so the same object can feed both the package
(converted to its types here) and the independent oracles in
`tests.oracles` without either side translating the other's output.
"""

from __future__ import annotations

import random
from fractions import Fraction

from linf_fixpoint import Pyramid, SearchSpace, rat
from linf_fixpoint.rational import Rat

from .oracles import PyramidSpec, space_pyramid_area


def to_rat(f: Fraction) -> Rat:
    return rat(int(f.numerator), int(f.denominator))


def to_frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def frac_in(rng: random.Random, lo_incl: int, hi_incl: int, den: int) -> Fraction:
    return Fraction(rng.randint(lo_incl, hi_incl), den)


def random_apex(rng: random.Random, d: int, den: int = 16) -> tuple[Fraction, ...]:
    return tuple(frac_in(rng, 0, den, den) for _ in range(d))


def random_pyramid_spec(rng: random.Random, d: int, den: int = 16) -> PyramidSpec:
    return (
        rng.randrange(d),
        rng.choice((-1, 1)),
        random_apex(rng, d, den),
    )


def spec_to_pyramid(spec: PyramidSpec) -> Pyramid:
    axis, sign, apex = spec
    return Pyramid(axis, sign, tuple(to_rat(a) for a in apex))


def specs_to_space(d: int, specs: list[PyramidSpec]) -> SearchSpace:
    return SearchSpace.unit_cube(d).with_cuts(
        [spec_to_pyramid(s) for s in specs]
    )


def random_space_2d(
    rng: random.Random,
    max_cuts: int,
    min_area: Fraction | None = None,
    den: int = 16,
) -> tuple[SearchSpace, list[PyramidSpec]]:
    """A random planar search space, regenerated until it is big enough.

    Corner-ward apexes keep most cuts shallow, so a handful of retries
    suffices even for min_area = 1/4.
    """
    while True:
        specs = [
            random_pyramid_spec(rng, 2, den)
            for _ in range(rng.randint(0, max_cuts))
        ]
        area = space_pyramid_area(specs, None)
        if min_area is None or area >= min_area:
            return specs_to_space(2, specs), specs
        specs = []


def random_space(
    rng: random.Random,
    d: int,
    max_cuts: int,
    min_volume: Fraction | None = None,
    den: int = 8,
) -> tuple[SearchSpace, list[PyramidSpec]]:
    """Random space in any small dimension, filtered by package volume.

    The d = 2 variant above filters by the independent oracle instead;
    use that when the volume itself is under test.
    """
    from linf_fixpoint.volume import search_space_volume

    while True:
        specs = [
            random_pyramid_spec(rng, d, den)
            for _ in range(rng.randint(0, max_cuts))
        ]
        space = specs_to_space(d, specs)
        if min_volume is None:
            return space, specs
        if search_space_volume(space) >= to_rat(min_volume):
            return space, specs


def affine_to_fracs(inst) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rows and offset of a package affine instance as Fractions."""
    rows = [[to_frac(v) for v in row] for row in inst.fn.rows]
    offset = [to_frac(v) for v in inst.fn.offset]
    return rows, offset
