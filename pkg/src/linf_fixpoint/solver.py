"""Fixed-point solvers: successive approximation and centerpoint cutting.

The cutting solver keeps a search space that provably contains every
fixed point of the map.  Each round it queries the map at a centerpoint
of the space; either the residual is already small enough, or the
displacement c - f(c) defines a halfspace that cannot contain any point
of a small ball around the fixed point, so cutting it away shrinks the
space by a constant volume factor while keeping that ball.  Volume
exhaustion therefore bounds the number of queries by
ceil(4 d^2 ln(1/r)) + 1 with r = eps(1-lam) / (2+2lam).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Literal

import gmpy2

from .centerpoint import find_centerpoint
from .errors import (
    InstanceFormatError,
    IterationLimitError,
    ZeroDirectionError,
)
from .geometry import (
    RatVec,
    SearchSpace,
    direction_from_displacement,
    linf_dist,
    search_space_cut,
)
from .instances import ContractionInstance
from .rational import Rat, rat, rat_str, snap_to_grid
from .volume.oracle import VolumeOracle, default_oracle

TraceLevel = Literal["none", "summary", "full"]

BANACH_GRID_DENOMINATOR = 1 << 64


@dataclass
class TraceEntry:
    iteration: int
    query_index: int
    space_volume: Rat | None
    residual: Rat
    point: RatVec | None = None
    direction: tuple[int, ...] | None = None


@dataclass
class SolveReport:
    method: str
    d: int
    lam: Rat
    eps: Rat
    answer: RatVec
    residual: Rat
    queries: int
    iterations: int
    wall_ms: float
    trace: list[TraceEntry] = field(default_factory=list)

    @property
    def succeeded(self) -> bool:
        return self.residual <= self.eps

    def to_jsonable(self) -> dict:
        from .rational import rat_decimal

        return {
            "method": self.method,
            "d": self.d,
            "lambda": rat_str(self.lam),
            "epsilon": rat_str(self.eps),
            "answer": [rat_str(x) for x in self.answer],
            "answer_decimal": [rat_decimal(x) for x in self.answer],
            "residual": rat_str(self.residual),
            "residual_decimal": rat_decimal(self.residual),
            "queries": self.queries,
            "iterations": self.iterations,
            "wall_ms": self.wall_ms,
            "succeeded": bool(self.succeeded),
            "trace": [
                {
                    "iteration": t.iteration,
                    "query_index": t.query_index,
                    "volume": rat_str(t.space_volume)
                    if t.space_volume is not None
                    else None,
                    "residual": rat_str(t.residual),
                    "point": [rat_str(x) for x in t.point]
                    if t.point is not None
                    else None,
                    "direction": list(t.direction)
                    if t.direction is not None
                    else None,
                }
                for t in self.trace
            ],
        }


def contraction_ball_radius(eps: Rat, lam: Rat) -> Rat:
    """Radius of the fixed-point ball no cut can touch.

    If the residual at c exceeds eps, every point within this radius of
    the fixed point moves strictly closer to f(c) than c does, hence
    lies outside the removed halfspace.
    """
    return eps * (1 - lam) / (2 + 2 * lam)


def centerpoint_query_bound(d: int, eps: Rat, lam: Rat) -> int:
    """ceil(4 d^2 ln(1/r)) + 1 queries suffice before volume runs out."""
    r = contraction_ball_radius(eps, lam)
    if r <= 0:
        raise InstanceFormatError("query bound needs lam < 1 and eps > 0")
    ln_inv = gmpy2.log(1 / gmpy2.mpfr(r, 128))
    return int(gmpy2.ceil(4 * d * d * ln_inv)) + 1


def banach_iteration_cap(eps: Rat, lam: Rat) -> int:
    """ceil(ln(1/eps) / ln(1/lam)) + 2 evaluations bound the iteration."""
    if not 0 < lam < 1:
        raise InstanceFormatError("successive approximation needs 0 < lam < 1")
    ln_eps = gmpy2.log(1 / gmpy2.mpfr(eps, 128))
    ln_lam = gmpy2.log(1 / gmpy2.mpfr(lam, 128))
    return int(gmpy2.ceil(ln_eps / ln_lam)) + 2


def banach_solve(
    inst: ContractionInstance,
    eps: Rat,
    start: RatVec | None = None,
    trace: TraceLevel = "summary",
) -> SolveReport:
    """Iterate x <- f(x) until the residual drops to eps.

    The residual between successive iterates contracts by lam each
    step, so the cap ceil(ln(1/eps)/ln(1/lam)) + 2 can only be exceeded
    when the declared lam is wrong for the map; that raises.

    Each new iterate is snapped to the dyadic grid with denominator
    2**64 before it is queried.  Exact rational iterates would otherwise
    multiply denominators every step and grow to thousands of digits;
    the snap keeps them word-sized while perturbing the limit by at most
    2**-63 / (1 - lam), far below any practical tolerance.  Reported
    residuals stay exact: they compare a queried point with its image.
    """
    eps = rat(eps)
    if eps <= 0:
        raise InstanceFormatError("epsilon must be positive")
    t0 = time.perf_counter()
    queries_before = inst.query_count
    x = start if start is not None else tuple(rat(0) for _ in range(inst.d))
    cap = banach_iteration_cap(eps, inst.lam)
    entries: list[TraceEntry] = []
    fx = inst.query(x)
    residual = linf_dist(x, fx)
    iteration = 0
    while residual > eps:
        if iteration >= cap:
            raise IterationLimitError(
                f"successive approximation still has residual {rat_str(residual)} "
                f"after {cap} evaluations; the declared contraction factor "
                f"{rat_str(inst.lam)} looks wrong"
            )
        x = tuple(snap_to_grid(v, BANACH_GRID_DENOMINATOR) for v in fx)
        fx = inst.query(x)
        residual = linf_dist(x, fx)
        iteration += 1
        if trace != "none":
            entries.append(
                TraceEntry(
                    iteration=iteration,
                    query_index=inst.query_count - queries_before,
                    space_volume=None,
                    residual=residual,
                    point=x if trace == "full" else None,
                )
            )
    wall_ms = (time.perf_counter() - t0) * 1000
    return SolveReport(
        method="banach",
        d=inst.d,
        lam=inst.lam,
        eps=eps,
        answer=x,
        residual=residual,
        queries=inst.query_count - queries_before,
        iterations=iteration,
        wall_ms=wall_ms,
        trace=entries,
    )


def lambda_cap_reduction(
    inst: ContractionInstance, eps: Rat
) -> tuple[ContractionInstance, Rat]:
    """Damp a barely-contracting or non-expansive map toward the origin.

    g(x) = (1 - eps/2) f(x) contracts with factor 1 - eps/2 and moves
    values by at most eps/2, so an (eps/2)-approximate fixed point of g
    is an eps-approximate fixed point of f.  Queries forward one to one
    to the wrapped instance.  Returns the damped instance and its
    solving tolerance eps/2.
    """
    eps = rat(eps)
    factor = 1 - eps / 2
    if factor <= 0:
        raise InstanceFormatError("epsilon too large for the damping reduction")

    def damped(x: RatVec) -> RatVec:
        return tuple(factor * v for v in inst.query(x))

    wrapped = ContractionInstance(
        d=inst.d,
        lam=factor,
        fn=damped,
        label=f"{inst.label}+damped",
        base=inst,
    )
    return wrapped, eps / 2


@dataclass
class _PreparedInstance:
    work: ContractionInstance
    work_eps: Rat
    undamp: Rat | None


def _prepare(inst: ContractionInstance, eps: Rat) -> _PreparedInstance:
    if inst.lam <= 1 - eps:
        return _PreparedInstance(work=inst, work_eps=eps, undamp=None)
    damped, half = lambda_cap_reduction(inst, eps)
    return _PreparedInstance(work=damped, work_eps=half, undamp=1 - eps / 2)


def centerpoint_solve(
    inst: ContractionInstance,
    eps: Rat,
    oracle: VolumeOracle | None = None,
    trace: TraceLevel = "summary",
    centerpoint_eps: Callable[[Rat, int], Rat] | None = None,
) -> SolveReport:
    """Cutting-plane solver driven by centerpoint queries.

    Maps with lam > 1 - eps (including non-expansive ones) are damped
    first, then solved to the damped tolerance; the reported residual is
    still measured against the original map, reconstructed exactly from
    the damped value.  The iteration cap is twice the theoretical query
    bound; hitting it means the map violates its declared contraction.
    """
    eps = rat(eps)
    if eps <= 0:
        raise InstanceFormatError("epsilon must be positive")
    t0 = time.perf_counter()
    queries_before = inst.query_count
    oracle = oracle or default_oracle()
    prep = _prepare(inst, eps)
    work, work_eps = prep.work, prep.work_eps
    bound = centerpoint_query_bound(inst.d, work_eps, work.lam)
    cap = 2 * bound
    space = SearchSpace.unit_cube(inst.d)
    entries: list[TraceEntry] = []
    iteration = 0
    while True:
        if iteration >= cap:
            raise IterationLimitError(
                f"centerpoint solver exceeded {cap} iterations "
                f"(theoretical bound {bound}); the declared contraction "
                f"factor looks wrong"
            )
        if centerpoint_eps is None:
            cert = find_centerpoint(space, oracle)
        else:
            vol = oracle.space_volume(space)
            cert = find_centerpoint(space, oracle, eps=centerpoint_eps(vol, inst.d))
        c = cert.point
        gc = work.query(c)
        residual_work = linf_dist(c, gc)
        iteration += 1
        if trace != "none":
            entries.append(
                TraceEntry(
                    iteration=iteration,
                    query_index=inst.query_count - queries_before,
                    space_volume=oracle.space_volume(space),
                    residual=residual_work,
                    point=c if trace == "full" else None,
                    direction=None,
                )
            )
        if residual_work <= work_eps:
            answer = c
            if prep.undamp is None:
                residual = residual_work
            else:
                fx = tuple(v / prep.undamp for v in gc)
                residual = linf_dist(c, fx)
            break
        displacement = tuple(a - b for a, b in zip(c, gc))
        try:
            direction = direction_from_displacement(displacement)
        except ZeroDirectionError:  # pragma: no cover - residual check catches this
            answer = c
            residual = residual_work
            break
        if trace != "none":
            entries[-1].direction = direction.signs
        space = search_space_cut(space, c, direction)
    wall_ms = (time.perf_counter() - t0) * 1000
    return SolveReport(
        method="centerpoint",
        d=inst.d,
        lam=inst.lam,
        eps=eps,
        answer=answer,
        residual=residual,
        queries=inst.query_count - queries_before,
        iterations=iteration,
        wall_ms=wall_ms,
        trace=entries,
    )
