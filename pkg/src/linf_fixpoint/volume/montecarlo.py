"""Monte-Carlo estimation of search-space and pyramid volumes.

A cross-check for the exact engine: sample uniform points in the cube,
count how many land in the region, and report the binomial standard
error.  Arithmetic here is floating point on purpose; boundary
misclassification has probability zero in exact arithmetic and measure
zero here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..geometry import Pyramid, SearchSpace


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    samples: int
    hits: int
    seed: int

    def within_sigma(self, reference: float, sigma: float) -> bool:
        """Whether a reference value lies within sigma standard errors."""
        spread = self.stderr if self.stderr > 0 else 1e-12
        return abs(self.value - reference) <= sigma * spread


def _float_pyramid(p: Pyramid) -> tuple[int, int, tuple[float, ...]]:
    return p.axis, p.sign, tuple(float(x) for x in p.apex)


def _pyramid_hit(axis: int, sign: int, apex: tuple[float, ...], y: list[float]) -> bool:
    lead = sign * (y[axis] - apex[axis])
    if lead < 0:
        return False
    for j, a in enumerate(apex):
        if j != axis and abs(y[j] - a) > lead:
            return False
    return True


def monte_carlo_volume(
    space: SearchSpace,
    pyramid: Pyramid | None = None,
    samples: int = 100_000,
    seed: int = 0,
) -> MCEstimate:
    """Estimate vol(space) or vol(space intersect pyramid) by sampling."""
    rng = random.Random(seed)
    d = space.d
    cuts = [_float_pyramid(p) for p in space.cuts]
    query = _float_pyramid(pyramid) if pyramid is not None else None
    hits = 0
    for _ in range(samples):
        y = [rng.random() for _ in range(d)]
        if any(_pyramid_hit(*c, y) for c in cuts):
            continue
        if query is not None and not _pyramid_hit(*query, y):
            continue
        hits += 1
    p_hat = hits / samples
    stderr = (p_hat * (1.0 - p_hat) / samples) ** 0.5
    return MCEstimate(value=p_hat, stderr=stderr, samples=samples, hits=hits, seed=seed)
