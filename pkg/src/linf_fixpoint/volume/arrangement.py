"""Hyperplane arrangements restricted to the unit cube.

The cube is refined one hyperplane at a time: every current cell is
classified against the new plane by its vertex values and split only
when the plane genuinely crosses it.  Each surviving cell records on
which side of every input plane it lies, so a cell's sign vector plus an
interior witness point classifies it against any region bounded by those
planes.  Cell volumes are exact and sum to the cube volume.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..geometry import RatVec
from ..rational import ONE, Rat
from .cells import PlaneRegistry, TrackedCell
from .hyperplanes import Hyperplane, dedupe_canonical
from .polytope import HPolytope

THREADS_ENV = "LINF_FIXPOINT_THREADS"


def worker_count() -> int:
    """Worker cap for cell-volume evaluation, from LINF_FIXPOINT_THREADS."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


@dataclass
class Cell:
    """One full-dimensional arrangement cell with its side signature."""

    sign_vector: tuple[int, ...]
    tracked: TrackedCell

    @cached_property
    def polytope(self) -> HPolytope:
        return self.tracked.to_hpolytope()

    @property
    def vertices(self) -> tuple[RatVec, ...]:
        return self.tracked.vertices

    def witness(self) -> RatVec:
        """A point interior to the cell (the vertex barycenter)."""
        return self.tracked.barycenter()

    def volume(self) -> Rat:
        return self.tracked.volume()


@dataclass
class CellDecomposition:
    """Cells of a hyperplane arrangement clipped to the unit cube."""

    d: int
    hyperplanes: tuple[Hyperplane, ...]
    cells: tuple[Cell, ...]

    def total_volume(self) -> Rat:
        self.compute_volumes()
        total = sum((c.volume() for c in self.cells), start=Rat(0))
        return total

    def compute_volumes(self) -> None:
        workers = worker_count()
        pending = [c.tracked for c in self.cells if c.tracked._volume is None]
        if workers > 1 and len(pending) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(TrackedCell.volume, pending))
        else:
            for cell in pending:
                cell.volume()

    def is_partition_of_cube(self) -> bool:
        return self.total_volume() == ONE

    def to_jsonable(self) -> dict:
        from ..rational import rat_str

        return {
            "d": self.d,
            "hyperplanes": [
                {"coeffs": list(h.coeffs), "offset": rat_str(h.offset)}
                for h in self.hyperplanes
            ],
            "cells": [
                {
                    "sign_vector": list(c.sign_vector),
                    "volume": rat_str(c.volume()),
                    "witness": [rat_str(x) for x in c.witness()],
                    "vertices": [[rat_str(x) for x in v] for v in c.vertices],
                }
                for c in self.cells
            ],
        }


def build_arrangement(
    hyperplanes: Sequence[Hyperplane], d: int, registry: PlaneRegistry | None = None
) -> CellDecomposition:
    """Refine the unit cube by the given hyperplanes.

    Duplicate planes (up to sign) are merged before refinement; the
    returned decomposition lists the deduplicated planes its sign
    vectors refer to.
    """
    planes = dedupe_canonical(list(hyperplanes))
    if registry is None:
        registry = PlaneRegistry(d)
    root = TrackedCell.unit_cube(registry)
    frontier: list[tuple[list[int], TrackedCell]] = [([], root)]
    for plane in planes:
        pid = registry.register(plane)
        grown: list[tuple[list[int], TrackedCell]] = []
        for signs, cell in frontier:
            kind = cell.classify_against(pid, 1)
            if kind > 0:
                grown.append((signs + [1], cell))
            elif kind < 0:
                grown.append((signs + [-1], cell))
            else:
                neg, pos = cell.split(pid)
                if neg is not None:
                    grown.append((signs + [-1], neg))
                if pos is not None:
                    grown.append((signs + [1], pos))
        frontier = grown
    cells = tuple(Cell(tuple(signs), cell) for signs, cell in frontier)
    return CellDecomposition(d, tuple(planes), cells)
