"""JSON forms of search spaces, pyramids and points.

Numbers serialise as strings ("3/4" or "0.125") and parse exactly;
axes are 0-based everywhere.  A search space document looks like

    {"d": 2, "cuts": [{"axis": 0, "sign": -1, "apex": ["1/2", "1/2"]}]}
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InstanceFormatError
from .geometry import Pyramid, RatVec, SearchSpace, as_vec
from .rational import rat_str


def pyramid_from_json(doc: object) -> Pyramid:
    if not isinstance(doc, dict):
        raise InstanceFormatError("pyramid document must be an object")
    try:
        axis = int(doc["axis"])
        sign = int(doc["sign"])
        apex = as_vec(doc["apex"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad pyramid document: {exc}") from exc
    if sign not in (-1, 1):
        raise InstanceFormatError("pyramid sign must be -1 or +1")
    if not 0 <= axis < len(apex):
        raise InstanceFormatError("pyramid axis out of range (axes are 0-based)")
    return Pyramid(axis=axis, sign=sign, apex=apex)


def pyramid_to_json(p: Pyramid) -> dict:
    return {
        "axis": p.axis,
        "sign": p.sign,
        "apex": [rat_str(x) for x in p.apex],
    }


def space_from_json(doc: object) -> SearchSpace:
    if not isinstance(doc, dict) or "d" not in doc:
        raise InstanceFormatError('search space document needs a "d" field')
    d = int(doc["d"])
    cuts = []
    for entry in doc.get("cuts", []):
        p = pyramid_from_json(entry)
        if p.dimension != d:
            raise InstanceFormatError("cut apex dimension differs from d")
        cuts.append(p)
    return SearchSpace(d=d, cuts=tuple(cuts))


def space_to_json(space: SearchSpace) -> dict:
    return {"d": space.d, "cuts": [pyramid_to_json(p) for p in space.cuts]}


def load_space(path: str | Path) -> SearchSpace:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"invalid JSON in {path}: {exc}") from exc
    return space_from_json(doc)


def parse_point(text: str) -> RatVec:
    """A comma-separated point like "1/2,3/4" or "0.5,0.75"."""
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise InstanceFormatError("empty point")
    return as_vec(parts)
