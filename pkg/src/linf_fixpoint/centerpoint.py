"""Centerpoints of search spaces under the Chebyshev metric.

A quality-a centerpoint of a space X is a point c such that every
halfspace based at c keeps at least a fraction a of vol(X).  The
construction pipeline:

  1. balance: starting from the all-ones corner outside the cube (so
     only negative pyramids carry mass), repeatedly pull mass between
     the negative pyramids until their masses are nearly equal;
  2. shift: pull along the negative diagonal until the positive
     pyramids hold about half of the per-pyramid mass;
  3. project: clamp into the cube, which preserves the relevant masses
     on the coordinates the clamp leaves unchanged.

All mass transfers go through one primitive, `pull`, a monotone binary
search over how far to slide a point along a sign direction.  With the
default tolerance the pipeline certifies quality 1/(4d); shrinking the
tolerance moves the quality toward 1/(2d) at higher oracle cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2

from .errors import (
    BalanceIterationError,
    DimensionMismatchError,
    EmptyInteriorError,
    PullPreconditionError,
    ZeroDirectionError,
)
from .geometry import (
    HalfspaceDir,
    Pyramid,
    RatVec,
    SearchSpace,
    all_halfspace_directions,
    clamp_to_unit_cube,
    linf_norm,
)
from .rational import ONE, ZERO, Rat, ceil_isqrt, rat
from .volume.oracle import VolumeOracle, default_oracle

SignVec = tuple[int, ...]


@dataclass(frozen=True)
class PullRequest:
    """Slide `start` along `direction` until the mass pulled away from
    the moving point reaches `target_mass`, within `slack`."""

    start: RatVec
    direction: SignVec
    target_mass: Rat
    slack: Rat

    def __post_init__(self) -> None:
        if any(s not in (-1, 0, 1) for s in self.direction):
            raise ZeroDirectionError("pull direction entries must be in {-1,0,+1}")
        if not any(self.direction):
            raise ZeroDirectionError("pull direction must be nonzero")
        if len(self.direction) != len(self.start):
            raise DimensionMismatchError("pull direction dimension differs from start")
        if self.slack <= 0:
            raise PullPreconditionError("pull slack must be positive")


@dataclass(frozen=True)
class BalanceStep:
    gamma: Rat
    split_rank: int
    direction: SignVec
    target_mass: Rat
    potential_before: Rat
    potential_after: Rat


@dataclass(frozen=True)
class BalanceState:
    c: RatVec
    pi: tuple[Rat, ...]
    potential: Rat
    steps: tuple[BalanceStep, ...] = ()


@dataclass(frozen=True)
class CenterpointCertificate:
    point: RatVec
    quality: Rat
    eps: Rat
    target_mass: Rat
    halfspace_volumes: dict[HalfspaceDir, Rat] | None = None


@dataclass(frozen=True)
class VerificationResult:
    certified: bool
    threshold: Rat
    space_volume: Rat
    worst_direction: HalfspaceDir
    worst_volume: Rat
    halfspace_volumes: dict[HalfspaceDir, Rat]


def pulled_mass(
    space: SearchSpace,
    start: RatVec,
    direction: SignVec,
    alpha: Rat,
    oracle: VolumeOracle | None = None,
) -> Rat:
    """Mass in the pyramids being pulled away from, at displacement alpha.

    For each moving coordinate i the pyramid opposite the motion,
    P(i, -u_i, start + alpha*u), gains mass as alpha grows and never
    loses it, so the sum is non-decreasing in alpha.
    """
    oracle = oracle or default_oracle()
    apex = tuple(x + alpha * u for x, u in zip(start, direction))
    total = ZERO
    for i, u in enumerate(direction):
        if u:
            total += oracle.pyramid_volume(space, Pyramid(i, -u, apex))
    return total


def pull(
    space: SearchSpace, request: PullRequest, oracle: VolumeOracle | None = None
) -> RatVec:
    """Binary-search the displacement whose pulled mass meets the target.

    Returns start + alpha*u with pulled mass in
    [target - slack, target]; the lower endpoint is kept throughout, so
    the target is never overshot.  The step resolution
    slack / ceil(sqrt(8 d^5)) makes the final bracket's mass spread at
    most `slack`, by the Lipschitz property of pyramid volumes.
    """
    oracle = oracle or default_oracle()
    d = space.d
    m = request.target_mass
    total = oracle.space_volume(space)
    if m > total:
        raise PullPreconditionError(
            f"pull target {m} exceeds the space volume {total}"
        )
    if m < 0:
        raise PullPreconditionError("pull target must be nonnegative")
    current = pulled_mass(space, request.start, request.direction, ZERO, oracle)
    if m < current:
        raise PullPreconditionError(
            f"pull target {m} is below the already-pulled mass {current}"
        )
    if m == current:
        return request.start
    lo = ZERO
    hi = 2 * linf_norm(request.start) + 2
    tau = request.slack / ceil_isqrt(8 * d**5)
    while hi - lo >= tau:
        mid = (lo + hi) / 2
        if pulled_mass(space, request.start, request.direction, mid, oracle) <= m:
            lo = mid
        else:
            hi = mid
    return tuple(x + lo * u for x, u in zip(request.start, request.direction))


def balance_iteration_cap(d: int, eps: Rat) -> int:
    """Iterations after which balancing must have converged."""
    bound = 2 * d**3 * gmpy2.log(gmpy2.mpfr(2, 128) / gmpy2.mpfr(eps * eps, 128))
    return int(gmpy2.ceil(bound))


def negative_pyramid_masses(
    space: SearchSpace, c: RatVec, oracle: VolumeOracle
) -> tuple[Rat, ...]:
    return tuple(
        oracle.pyramid_volume(space, Pyramid(i, -1, c)) for i in range(space.d)
    )


def balance_negative_pyramids(
    space: SearchSpace, eps: Rat, oracle: VolumeOracle | None = None
) -> BalanceState:
    """Equalise the masses of the negative pyramids of a point above the cube.

    Starts at the all-ones vector, where the positive pyramids miss the
    cube entirely, and repeatedly pulls along the lightest group of
    coordinates across the largest gap in the sorted masses.  Stops once
    the potential (sum of squared deviations from the mean mass) is at
    most eps^2; the squared-gap drop per iteration makes the cap
    ceil(2 d^3 ln(2/eps^2)) sufficient, and exceeding it reports a hard
    error rather than a degraded answer.
    """
    if eps <= 0:
        raise PullPreconditionError("balance tolerance must be positive")
    oracle = oracle or default_oracle()
    d = space.d
    total = oracle.space_volume(space)
    if total <= 0:
        raise EmptyInteriorError("cannot balance a volume-zero search space")
    mean = total / d
    c: RatVec = tuple(ONE for _ in range(d))
    pi = negative_pyramid_masses(space, c, oracle)
    potential = sum(((p - mean) ** 2 for p in pi), start=ZERO)
    steps: list[BalanceStep] = []
    cap = balance_iteration_cap(d, eps)
    target_potential = eps * eps
    slack = eps * eps / (8 * d**3)
    while potential > target_potential:
        if len(steps) >= cap:
            raise BalanceIterationError(
                f"balancing exceeded {cap} iterations at potential {potential}"
            )
        order = sorted(range(d), key=lambda i: (-pi[i], i))
        gaps = [pi[order[j]] - pi[order[j + 1]] for j in range(d - 1)]
        gamma = max(gaps)
        split = gaps.index(gamma)
        light = order[split + 1 :]
        direction = tuple(1 if i in light else 0 for i in range(d))
        target = sum((pi[i] for i in light), start=ZERO) + gamma / 2
        c = pull(space, PullRequest(c, direction, target, slack), oracle)
        pi = negative_pyramid_masses(space, c, oracle)
        new_potential = sum(((p - mean) ** 2 for p in pi), start=ZERO)
        steps.append(
            BalanceStep(
                gamma=gamma,
                split_rank=split,
                direction=direction,
                target_mass=target,
                potential_before=potential,
                potential_after=new_potential,
            )
        )
        potential = new_potential
    return BalanceState(c=c, pi=pi, potential=potential, steps=tuple(steps))


def shift_to_diagonal(
    space: SearchSpace,
    c: RatVec,
    m: Rat,
    eps: Rat,
    oracle: VolumeOracle | None = None,
) -> RatVec:
    """Pull toward the cube along the negative diagonal until the
    positive pyramids hold m/2 of the mass (within eps).

    The negative pyramids can only lose what the positives gain, so if
    each held at least m beforehand they keep at least m/2.
    """
    oracle = oracle or default_oracle()
    if m < 0:
        raise PullPreconditionError("shift mass must be nonnegative")
    if m == 0:
        return c
    direction = tuple(-1 for _ in range(space.d))
    return pull(space, PullRequest(c, direction, m / 2, eps), oracle)


def project_to_cube(space: SearchSpace, c: RatVec) -> tuple[RatVec, tuple[int, ...]]:
    """Clamp into the unit cube; returns the point and the coordinates
    the clamp left unchanged (the masses survive on those)."""
    if len(c) != space.d:
        raise DimensionMismatchError("point dimension differs from space")
    projected = clamp_to_unit_cube(c)
    unchanged = tuple(i for i in range(space.d) if projected[i] == c[i])
    return projected, unchanged


def find_centerpoint(
    space: SearchSpace,
    oracle: VolumeOracle | None = None,
    eps: Rat | None = None,
    with_halfspace_volumes: bool = False,
) -> CenterpointCertificate:
    """Point of the cube whose every halfspace keeps a constant fraction
    of the space's volume.

    With the default tolerance eps = vol(X)/(6d) the certified quality
    is exactly 1/(4d).  Smaller eps raises the quality toward 1/(2d) at
    the cost of more volume queries; eps must stay below vol(X)/(3d)
    for the certificate to be positive.
    """
    oracle = oracle or default_oracle()
    d = space.d
    total = oracle.space_volume(space)
    if total <= 0:
        raise EmptyInteriorError("search space has volume zero")
    if eps is None:
        eps = total / (6 * d)
    else:
        eps = rat(eps)
        if eps <= 0 or 3 * eps >= total / d:
            raise PullPreconditionError(
                "centerpoint tolerance must lie in (0, vol(X)/(3d))"
            )
    balanced = balance_negative_pyramids(space, eps, oracle)
    m = total / d - eps
    shifted = shift_to_diagonal(space, balanced.c, m, eps, oracle)
    point, _unchanged = project_to_cube(space, shifted)
    quality = (m / 2 - eps) / total
    volumes = None
    if with_halfspace_volumes:
        result = verify_centerpoint(space, point, quality, oracle)
        volumes = result.halfspace_volumes
    return CenterpointCertificate(
        point=point, quality=quality, eps=eps, target_mass=m, halfspace_volumes=volumes
    )


VERIFY_DIMENSION_LIMIT = 8


def verify_centerpoint(
    space: SearchSpace,
    point: RatVec,
    alpha: Rat,
    oracle: VolumeOracle | None = None,
) -> VerificationResult:
    """Exhaustively check the centerpoint inequality over all 3^d - 1
    halfspace directions.

    Each halfspace volume is the sum of its decomposition pyramids'
    volumes (overlaps are measure zero), so 2d pyramid queries suffice
    for the whole check.  Refuses d > 8, where 3^d - 1 directions stop
    being worth enumerating.
    """
    d = space.d
    if len(point) != d:
        raise DimensionMismatchError(
            f"point has {len(point)} coordinates, space dimension is {d}"
        )
    if d > VERIFY_DIMENSION_LIMIT:
        raise DimensionMismatchError(
            f"verification enumerates 3^d - 1 directions; d={d} exceeds the "
            f"limit of {VERIFY_DIMENSION_LIMIT}"
        )
    oracle = oracle or default_oracle()
    total = oracle.space_volume(space)
    pos = [oracle.pyramid_volume(space, Pyramid(i, 1, point)) for i in range(d)]
    neg = [oracle.pyramid_volume(space, Pyramid(i, -1, point)) for i in range(d)]
    volumes: dict[HalfspaceDir, Rat] = {}
    worst_dir: HalfspaceDir | None = None
    worst_vol: Rat | None = None
    for direction in all_halfspace_directions(d):
        vol = ZERO
        for i, s in enumerate(direction.signs):
            if s >= 0:
                vol += pos[i]
            if s <= 0:
                vol += neg[i]
        volumes[direction] = vol
        if worst_vol is None or vol < worst_vol:
            worst_vol = vol
            worst_dir = direction
    assert worst_dir is not None and worst_vol is not None
    return VerificationResult(
        certified=worst_vol >= alpha * total,
        threshold=alpha * total,
        space_volume=total,
        worst_direction=worst_dir,
        worst_volume=worst_vol,
        halfspace_volumes=volumes,
    )
