"""Reductions between fixed-point problem classes and block composition.

The solvers in `solver` want strict contractions on the unit cube.
Real problems arrive as non-expansive maps, maps whose range spills
slightly outside the cube, maps on sub-boxes, or high-dimensional maps
that factor over coordinate blocks.  This module carries each of those
onto the solvable core and transfers the answers back:

  dagger_to_plain      range slack -> clamped range, one extra query
  plain_to_contraction non-expansive -> damped strict contraction
  rebox_to_unit_cube   square sub-box domain -> unit cube domain
  compose              solver for a block pair from per-block solvers
  sqrt_block_solve     pad to a square count and fold over sqrt-size blocks

Query accounting threads through wrapper chains to the root instance,
one count per underlying evaluation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .errors import (
    DimensionMismatchError,
    InstanceFormatError,
    RangeViolationError,
)
from .geometry import RatVec, clamp_to_unit_cube, linf_dist
from .instances import ContractionInstance
from .rational import ONE, ZERO, Rat, ceil_isqrt, rat
from .solver import SolveReport, centerpoint_solve
from .volume.oracle import VolumeOracle


@dataclass(frozen=True)
class BoxDomain:
    """An axis box [lower, upper], possibly a sub-box of the unit cube."""

    lower: RatVec
    upper: RatVec

    def __post_init__(self) -> None:
        if len(self.lower) != len(self.upper):
            raise DimensionMismatchError("box corner dimensions differ")
        if any(a > b for a, b in zip(self.lower, self.upper)):
            raise InstanceFormatError("box lower corner exceeds upper corner")

    @classmethod
    def unit_cube(cls, d: int) -> "BoxDomain":
        return cls(tuple(ZERO for _ in range(d)), tuple(ONE for _ in range(d)))

    @property
    def d(self) -> int:
        return len(self.lower)

    @property
    def widths(self) -> RatVec:
        return tuple(b - a for a, b in zip(self.lower, self.upper))

    def is_square(self) -> bool:
        w = self.widths
        return all(x == w[0] for x in w)

    def contains(self, x: RatVec, slack: Rat = ZERO) -> bool:
        return all(
            a - slack * (b - a) <= v <= b + slack * (b - a)
            for a, b, v in zip(self.lower, self.upper, x)
        )


def box_projection(x: RatVec, box: BoxDomain) -> RatVec:
    """Coordinatewise clamp onto the box (the Chebyshev-nearest point)."""
    if len(x) != box.d:
        raise DimensionMismatchError("point dimension differs from box")
    return tuple(
        a if v < a else b if v > b else v
        for a, b, v in zip(box.lower, box.upper, x)
    )


@dataclass
class NonExpDaggerInstance:
    """Non-expansive map on a box whose range may spill out by a margin.

    The range lives in the box fattened by eps times the box width on
    each side; eps = 0 means the map sends the box into itself.  Query
    counting mirrors ContractionInstance, delegating to `base` for
    wrappers so the root instance keeps the authoritative ledger.
    """

    d: int
    eps: Rat
    fn: Callable[[RatVec], RatVec]
    box: BoxDomain | None = None
    label: str = "dagger"
    queries: int = 0
    base: object | None = None

    def __post_init__(self) -> None:
        if self.box is None:
            self.box = BoxDomain.unit_cube(self.d)
        if self.box.d != self.d:
            raise DimensionMismatchError("box dimension differs from instance")
        if self.eps < 0:
            raise InstanceFormatError("range slack must be nonnegative")

    def query(self, x: RatVec) -> RatVec:
        if len(x) != self.d:
            raise DimensionMismatchError("query point dimension differs from instance")
        if self.base is None:
            self.queries += 1
        y = self.fn(x)
        if len(y) != self.d:
            raise RangeViolationError("map returned a vector of the wrong dimension")
        assert self.box is not None
        if not self.box.contains(y, slack=self.eps):
            raise RangeViolationError(
                "map value leaves the declared slack-fattened box"
            )
        return y

    @property
    def query_count(self) -> int:
        if self.base is not None:
            return self.base.query_count  # type: ignore[union-attr]
        return self.queries


DaggerSolver = Callable[[NonExpDaggerInstance], RatVec]


def as_dagger(inst: ContractionInstance) -> NonExpDaggerInstance:
    """View a cube self-map instance as a zero-slack dagger instance."""
    return NonExpDaggerInstance(
        d=inst.d,
        eps=ZERO,
        fn=inst.query,
        label=inst.label,
        base=inst,
    )


def rebox_to_unit_cube(inst: NonExpDaggerInstance) -> NonExpDaggerInstance:
    """Carry an instance on a square sub-box onto the unit cube.

    The change of variables x = a + w*z is an isotropic similarity, so
    it preserves the Chebyshev modulus and scales residuals by exactly
    the box width w; the range slack eps is width-relative and carries
    over unchanged.  Non-square boxes would rescale coordinates
    unevenly, which can break non-expansiveness, so they are rejected.
    """
    box = inst.box
    assert box is not None
    if not box.is_square():
        raise InstanceFormatError(
            "reboxing needs a square box; uneven widths change the modulus"
        )
    w = box.widths[0] if box.d else ONE
    if w == 0:
        raise InstanceFormatError("cannot rebox a degenerate (zero-width) box")
    lower = box.lower

    def normalized(z: RatVec) -> RatVec:
        x = tuple(a + w * t for a, t in zip(lower, z))
        y = inst.query(x)
        return tuple((v - a) / w for a, v in zip(lower, y))

    return NonExpDaggerInstance(
        d=inst.d,
        eps=inst.eps,
        fn=normalized,
        box=BoxDomain.unit_cube(inst.d),
        label=f"{inst.label}+unit",
        base=inst,
    )


def unrebox_point(z: RatVec, box: BoxDomain) -> RatVec:
    """Map a unit-cube answer back into the original box coordinates."""
    w = box.widths[0] if box.d else ONE
    return tuple(a + w * t for a, t in zip(box.lower, z))


def dagger_to_plain(inst: NonExpDaggerInstance, plain_solver: DaggerSolver) -> RatVec:
    """Solve a range-slack instance through a solver for range-clean maps.

    The sub-solver sees the clamped map, which is non-expansive with
    range inside the cube.  One additional query at its answer x tells
    which coordinates of f(x) spilled out; those are snapped to the
    violated cube face.  If the sub-solver met tolerance e on the
    clamped map, the returned point is (e + eps)-approximate for the
    original (2e-approximate when nothing spills), at exactly one query
    more than the sub-solver spent.
    """
    box = inst.box
    assert box is not None
    if box.widths and any(w != ONE for w in box.widths):
        raise InstanceFormatError("dagger_to_plain expects a unit-cube instance")

    def clamped(x: RatVec) -> RatVec:
        return clamp_to_unit_cube(inst.query(x))

    plain = NonExpDaggerInstance(
        d=inst.d,
        eps=ZERO,
        fn=clamped,
        label=f"{inst.label}+clamped",
        base=inst,
    )
    x = plain_solver(plain)
    value = inst.query(x)
    return tuple(
        ZERO if v < ZERO else ONE if v > ONE else xi for xi, v in zip(x, value)
    )


def plain_to_contraction(
    inst: NonExpDaggerInstance,
    eps: Rat,
    contraction_solver: Callable[[ContractionInstance, Rat], RatVec] | None = None,
    oracle: VolumeOracle | None = None,
) -> RatVec:
    """Solve a non-expansive cube self-map by damping it.

    g = (1 - eps/2) f contracts with factor 1 - eps/2 and stays within
    eps/2 of f on the cube, so solving g to eps/2 gives an
    eps-approximate fixed point of f.
    """
    eps = rat(eps)
    if eps <= 0:
        raise InstanceFormatError("epsilon must be positive")
    if inst.eps != 0:
        raise InstanceFormatError(
            "plain_to_contraction expects a zero-slack (range-clean) instance"
        )
    factor = 1 - eps / 2

    def damped(x: RatVec) -> RatVec:
        return tuple(factor * v for v in inst.query(x))

    g = ContractionInstance(
        d=inst.d,
        lam=factor,
        fn=damped,
        label=f"{inst.label}+damped",
        base=inst,  # type: ignore[arg-type]
    )
    if contraction_solver is None:
        report = centerpoint_solve(g, eps / 2, oracle=oracle, trace="none")
        return report.answer
    return contraction_solver(g, eps / 2)


def compose(
    inner_solver: DaggerSolver,
    outer_solver: DaggerSolver,
    d_inner: int,
    d_outer: int,
) -> DaggerSolver:
    """Solver for a (d_inner + d_outer)-dimensional map from block solvers.

    For each setting of the outer block the inner solver finds a fixed
    point of the inner block; the outer solver then solves the induced
    outer map.  On maps that factor over the two blocks this is exact:
    the induced map is the outer factor itself.  Inner answers are
    memoised per outer point, so the query count stays within
    (inner + 1) evaluations per outer query.
    """
    if d_inner < 0 or d_outer < 0:
        raise DimensionMismatchError("block dimensions must be nonnegative")

    def solve(inst: NonExpDaggerInstance) -> RatVec:
        if inst.d != d_inner + d_outer:
            raise DimensionMismatchError(
                f"composed solver expects dimension {d_inner + d_outer}, "
                f"got {inst.d}"
            )
        if d_inner == 0:
            return outer_solver(inst)
        if d_outer == 0:
            return inner_solver(inst)
        memo: dict[RatVec, RatVec] = {}

        def inner_fix(x_outer: RatVec) -> RatVec:
            got = memo.get(x_outer)
            if got is not None:
                return got
            sub = NonExpDaggerInstance(
                d=d_inner,
                eps=inst.eps,
                fn=lambda x_in: inst.query(x_in + x_outer)[:d_inner],
                label=f"{inst.label}+inner",
                base=inst,
            )
            answer = inner_solver(sub)
            memo[x_outer] = answer
            return answer

        induced = NonExpDaggerInstance(
            d=d_outer,
            eps=inst.eps,
            fn=lambda x_out: inst.query(inner_fix(x_out) + x_out)[d_inner:],
            label=f"{inst.label}+outer",
            base=inst,
        )
        x_outer = outer_solver(induced)
        return inner_fix(x_outer) + x_outer

    return solve


def block_dagger_solver(
    eps: Rat, oracle: VolumeOracle | None = None
) -> DaggerSolver:
    """The per-block pipeline: strip range slack, damp, cut to a centerpoint.

    Solves any unit-cube dagger instance with slack at most eps/2 to
    residual eps: the clamped map is solved to eps/2 by damping (inner
    tolerance eps/4, factor 1 - eps/4), and the spill post-processing
    adds back at most the slack.
    """
    eps = rat(eps)

    def solve(inst: NonExpDaggerInstance) -> RatVec:
        return dagger_to_plain(
            inst,
            lambda plain: plain_to_contraction(plain, eps / 2, oracle=oracle),
        )

    return solve


def sqrt_block_solve(
    inst: ContractionInstance | NonExpDaggerInstance,
    eps: Rat,
    oracle: VolumeOracle | None = None,
) -> SolveReport:
    """Solve a d-dimensional map through ceil(sqrt(d)) blocks of that size.

    The instance is padded with dummy coordinates mapped to 0 until the
    dimension is a perfect square k^2, then solved by folding the
    per-block pipeline through `compose` k times.  Each level multiplies
    the query count rather than the dimension's exponential, which is
    the point of the construction.  The reported residual is a
    diagnostic evaluation of the map outside the query ledger.
    """
    eps = rat(eps)
    if eps <= 0:
        raise InstanceFormatError("epsilon must be positive")
    if isinstance(inst, ContractionInstance):
        dagger = as_dagger(inst)
        raw_fn = inst.fn
    else:
        dagger = inst
        raw_fn = inst.fn
        if dagger.eps * 2 > eps:
            raise InstanceFormatError(
                "sqrt_block_solve needs range slack at most eps/2"
            )
    d = dagger.d
    t0 = time.perf_counter()
    queries_before = dagger.query_count
    k = ceil_isqrt(d)
    padded_d = k * k
    pad = padded_d - d

    def padded_fn(x: RatVec) -> RatVec:
        y = dagger.query(x[:d])
        return y + tuple(ZERO for _ in range(pad))

    padded = NonExpDaggerInstance(
        d=padded_d,
        eps=dagger.eps,
        fn=padded_fn,
        label=f"{dagger.label}+padded",
        base=dagger,
    )
    block = block_dagger_solver(eps, oracle)
    solver: DaggerSolver = block
    width = k
    while width < padded_d:
        solver = compose(solver, block, width, k)
        width += k
    answer_padded = solver(padded) if pad else solver(dagger)
    answer = answer_padded[:d]
    image = raw_fn(answer)
    residual = linf_dist(answer, image[:d] if len(image) > d else image)
    wall_ms = (time.perf_counter() - t0) * 1000
    lam = inst.lam if isinstance(inst, ContractionInstance) else ONE
    return SolveReport(
        method="decomposed",
        d=d,
        lam=lam,
        eps=eps,
        answer=answer,
        residual=residual,
        queries=dagger.query_count - queries_before,
        iterations=k,
        wall_ms=wall_ms,
        trace=[],
    )
