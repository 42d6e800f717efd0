"""Test maps: clamped affine contractions and small game operators.

Both families evaluate exactly over the rationals and carry a declared
Lipschitz constant for the Chebyshev metric, so solvers can budget
iterations and auditors can check the declaration against sampled
pairs.  Instances count their evaluations; wrappers built by the
reduction layer forward to these counters one to one.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .errors import DimensionMismatchError, InstanceFormatError, RangeViolationError
from .geometry import RatVec, as_vec, clamp_to_unit_cube, in_unit_cube
from .rational import ONE, ZERO, Rat, rat, rat_str


@dataclass
class ContractionInstance:
    """A map of the unit cube into itself with Lipschitz constant lam.

    lam may be 1 (non-expansive); solvers that need strict contraction
    either reject that or first damp the map toward zero.  `query`
    counts every evaluation; nothing is deduplicated, so the counter is
    an honest oracle-call ledger.  A wrapper whose evaluation runs
    through another instance's `query` sets `base` to that instance and
    then adds nothing itself, keeping the ledger one count per
    underlying evaluation.
    """

    d: int
    lam: Rat
    fn: Callable[[RatVec], RatVec]
    label: str = "instance"
    fixed_point: RatVec | None = None
    queries: int = 0
    base: "ContractionInstance | None" = None

    def __post_init__(self) -> None:
        if not (0 <= self.lam <= 1):
            raise InstanceFormatError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.d < 1:
            raise InstanceFormatError("instance dimension must be >= 1")

    def query(self, x: RatVec) -> RatVec:
        if len(x) != self.d:
            raise DimensionMismatchError("query point dimension differs from instance")
        if not in_unit_cube(x):
            raise RangeViolationError(
                f"query point {tuple(map(str, x))} lies outside the unit cube"
            )
        if self.base is None:
            self.queries += 1
        y = self.fn(x)
        if len(y) != self.d:
            raise RangeViolationError("map returned a vector of the wrong dimension")
        if not in_unit_cube(y):
            raise RangeViolationError(
                f"map value {tuple(map(str, y))} leaves the unit cube"
            )
        return y

    @property
    def query_count(self) -> int:
        """The authoritative evaluation count (the root of a wrapper chain)."""
        return self.base.query_count if self.base is not None else self.queries


@dataclass(frozen=True)
class AffineMap:
    """x -> clamp(A x + b) with exact rational entries.

    The Chebyshev Lipschitz constant of x -> A x is the largest row sum
    of |A|, and clamping is non-expansive, so the composite contracts
    with the declared lam as long as every row sum stays below it.
    """

    rows: tuple[RatVec, ...]
    offset: RatVec

    @property
    def d(self) -> int:
        return len(self.offset)

    def row_norm(self) -> Rat:
        return max(
            (sum((abs(a) for a in row), start=ZERO) for row in self.rows),
            default=ZERO,
        )

    def raw(self, x: RatVec) -> RatVec:
        return tuple(
            sum((a * v for a, v in zip(row, x)), start=ZERO) + b
            for row, b in zip(self.rows, self.offset)
        )

    def __call__(self, x: RatVec) -> RatVec:
        return clamp_to_unit_cube(self.raw(x))


def affine_instance(
    rows: Sequence[Sequence[Rat]],
    offset: Sequence[Rat],
    lam: Rat | None = None,
    label: str = "affine",
    fixed_point: RatVec | None = None,
) -> ContractionInstance:
    amap = AffineMap(tuple(as_vec(r) for r in rows), as_vec(offset))
    norm = amap.row_norm()
    if lam is None:
        lam = norm
    elif norm > lam:
        raise InstanceFormatError(
            f"declared lambda {lam} is below the largest row sum {norm}"
        )
    return ContractionInstance(
        d=amap.d, lam=rat(lam), fn=amap, label=label, fixed_point=fixed_point
    )


@dataclass(frozen=True)
class ToyGameNode:
    """One state of a value-iteration operator on at most a few nodes.

    kind "min"/"max" picks the extreme continuation value among the
    successors; kind "avg" mixes them with fixed rational weights; every
    node adds a payoff and damps by a discount within [0, 1].
    """

    kind: str
    succ: tuple[int, ...]
    weights: tuple[Rat, ...] | None
    payoff: Rat
    discount: Rat


@dataclass(frozen=True)
class ToyGameOperator:
    nodes: tuple[ToyGameNode, ...]

    def __call__(self, x: RatVec) -> RatVec:
        out = []
        for node in self.nodes:
            vals = [x[j] for j in node.succ]
            if node.kind == "min":
                v = min(vals)
            elif node.kind == "max":
                v = max(vals)
            else:
                v = sum(
                    (w * t for w, t in zip(node.weights or (), vals)), start=ZERO
                )
            out.append(node.payoff + node.discount * v)
        return clamp_to_unit_cube(tuple(out))

    def lipschitz(self) -> Rat:
        """min/max selections are non-expansive and weights sum to one,
        so the modulus is the largest discount."""
        return max((n.discount for n in self.nodes), default=ZERO)


MAX_TOYGAME_NODES = 4


def toygame_instance(
    nodes: Sequence[ToyGameNode], label: str = "toygame"
) -> ContractionInstance:
    if not 1 <= len(nodes) <= MAX_TOYGAME_NODES:
        raise InstanceFormatError(
            f"toy games support 1..{MAX_TOYGAME_NODES} nodes, got {len(nodes)}"
        )
    for node in nodes:
        if node.kind not in ("min", "max", "avg"):
            raise InstanceFormatError(f"unknown node kind {node.kind!r}")
        if any(not 0 <= j < len(nodes) for j in node.succ):
            raise InstanceFormatError("successor index out of range")
        if not node.succ:
            raise InstanceFormatError("every node needs at least one successor")
        if node.kind == "avg":
            if node.weights is None or len(node.weights) != len(node.succ):
                raise InstanceFormatError("avg nodes need one weight per successor")
            if any(w < 0 for w in node.weights) or sum(node.weights) != ONE:
                raise InstanceFormatError("avg weights must be nonnegative and sum to 1")
        if not 0 <= node.discount <= 1:
            raise InstanceFormatError("discount must lie in [0, 1]")
    op = ToyGameOperator(tuple(nodes))
    return ContractionInstance(
        d=len(nodes), lam=op.lipschitz(), fn=op, label=label
    )


def _parse_matrix(data: object, d: int) -> tuple[RatVec, ...]:
    if not isinstance(data, list) or len(data) != d:
        raise InstanceFormatError("matrix A must be a list of d rows")
    rows = []
    for row in data:
        if not isinstance(row, list) or len(row) != d:
            raise InstanceFormatError("matrix rows must have length d")
        rows.append(as_vec(row))
    return tuple(rows)


def load_instance(source: str | Path | dict) -> ContractionInstance:
    """Build an instance from a JSON file or an already-parsed document.

    Affine documents carry "A", "b" and optionally "fixed_point" and
    "lambda"; toygame documents carry a "nodes" list.  All numbers may
    be fraction strings ("3/4"), decimal strings ("0.75"), or integers;
    nothing is parsed through binary floating point.
    """
    if isinstance(source, (str, Path)):
        try:
            doc = json.loads(Path(source).read_text())
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"invalid JSON in {source}: {exc}") from exc
        label = Path(source).stem
    else:
        doc = source
        label = str(doc.get("label", "instance"))
    if not isinstance(doc, dict) or "type" not in doc:
        raise InstanceFormatError('instance document needs a "type" field')
    kind = doc["type"]
    if kind == "affine":
        b = as_vec(doc.get("b", ()))
        d = len(b)
        if d == 0:
            raise InstanceFormatError("affine instance needs a nonempty offset b")
        rows = _parse_matrix(doc.get("A"), d)
        lam = rat(doc["lambda"]) if "lambda" in doc else None
        fixed = as_vec(doc["fixed_point"]) if "fixed_point" in doc else None
        inst = affine_instance(rows, b, lam, label=label, fixed_point=fixed)
        if fixed is not None:
            if len(fixed) != d or not in_unit_cube(fixed):
                raise InstanceFormatError("declared fixed point must lie in the cube")
            image = inst.fn(fixed)
            if image != fixed:
                raise InstanceFormatError(
                    "declared fixed point is not fixed by the map"
                )
        return inst
    if kind == "toygame":
        raw_nodes = doc.get("nodes")
        if not isinstance(raw_nodes, list):
            raise InstanceFormatError('toygame instance needs a "nodes" list')
        nodes = []
        for entry in raw_nodes:
            weights = entry.get("weights")
            nodes.append(
                ToyGameNode(
                    kind=entry.get("kind", "avg"),
                    succ=tuple(entry.get("succ", ())),
                    weights=as_vec(weights) if weights is not None else None,
                    payoff=rat(entry.get("payoff", 0)),
                    discount=rat(entry.get("discount", 1)),
                )
            )
        inst = toygame_instance(nodes, label=label)
        if "lambda" in doc and rat(doc["lambda"]) != inst.lam:
            raise InstanceFormatError(
                f'declared lambda {doc["lambda"]} does not match the operator '
                f"modulus {rat_str(inst.lam)}"
            )
        return inst
    raise InstanceFormatError(f"unknown instance type {kind!r}")


def random_affine(d: int, lam: Rat, seed: int) -> ContractionInstance:
    """Random clamped affine contraction with a known interior behaviour.

    Row sums of |A| land in [lam/2, lam] with denominator 64, signs are
    random, and the offset is chosen so a chosen cube point is an exact
    fixed point (stored on the instance for audits).
    """
    lam = rat(lam)
    if not 0 < lam <= 1:
        raise InstanceFormatError("random_affine needs lambda in (0, 1]")
    rng = random.Random(seed)
    den = 64
    scaled = lam * den
    lam_units = max(1, scaled.numerator // scaled.denominator)
    rows: list[RatVec] = []
    for _ in range(d):
        budget = rng.randint((lam_units + 1) // 2, lam_units)
        split = sorted(rng.randint(0, budget) for _ in range(d - 1))
        parts = (
            [split[0]] + [b - a for a, b in zip(split, split[1:])] + [budget - split[-1]]
            if d > 1
            else [budget]
        )
        rng.shuffle(parts)
        rows.append(
            tuple(rat(p * rng.choice((-1, 1)), den) for p in parts)
        )
    star = tuple(rat(rng.randint(0, den), den) for _ in range(d))
    amap_rows = tuple(rows)
    residual_free = tuple(
        star[i] - sum((a * v for a, v in zip(amap_rows[i], star)), start=ZERO)
        for i in range(d)
    )
    return affine_instance(
        amap_rows,
        residual_free,
        lam,
        label=f"random-affine-d{d}-seed{seed}",
        fixed_point=star,
    )
