import random
from fractions import Fraction

from linf_fixpoint.rational import rat
from linf_fixpoint.volume import (
    Hyperplane,
    PlaneRegistry,
    TrackedCell,
    build_arrangement,
    dedupe_canonical,
    worker_count,
)

from .oracles import brute_cells_2d
from .support import to_frac


def random_planes_2d(rng: random.Random, n: int) -> list[Hyperplane]:
    planes = []
    while len(planes) < n:
        a = rng.randint(-1, 1)
        b = rng.randint(-1, 1)
        if a == 0 and b == 0:
            continue
        c = rat(rng.randint(-8, 8), 8)
        planes.append(Hyperplane((a, b), c).canonical())
    return dedupe_canonical(planes)


class TestArrangement2D:
    def test_matches_brute_force_enumeration(self):
        rng = random.Random(101)
        for _ in range(10):
            planes = random_planes_2d(rng, rng.randint(1, 4))
            decomp = build_arrangement(planes, 2)
            got = {}
            for cell in decomp.cells:
                got[cell.sign_vector] = got.get(cell.sign_vector, rat(0)) + cell.volume()
            oracle_planes = [
                (
                    Fraction(p.coeffs[0]),
                    Fraction(p.coeffs[1]),
                    to_frac(p.offset),
                )
                for p in decomp.hyperplanes
            ]
            expected = dict(brute_cells_2d(oracle_planes))
            assert set(got) == set(expected)
            for signs, area in expected.items():
                assert to_frac(got[signs]) == area

    def test_cells_partition_cube(self):
        rng = random.Random(103)
        for _ in range(6):
            planes = random_planes_2d(rng, 3)
            decomp = build_arrangement(planes, 2)
            assert decomp.total_volume() == 1
            assert decomp.is_partition_of_cube()

    def test_no_planes_single_cell(self):
        decomp = build_arrangement([], 2)
        assert len(decomp.cells) == 1
        assert decomp.cells[0].volume() == 1

    def test_witness_sign_vectors_consistent(self):
        planes = [
            Hyperplane((1, -1), rat(0)),
            Hyperplane((1, 1), rat(1)),
        ]
        decomp = build_arrangement(planes, 2)
        for cell in decomp.cells:
            w = cell.witness()
            for plane, sign in zip(decomp.hyperplanes, cell.sign_vector):
                value = plane.evaluate(w)
                assert sign * value > 0

    def test_duplicate_planes_collapse(self):
        p = Hyperplane((1, 0), rat(1, 2))
        q = Hyperplane((-2, 0), rat(-1))
        decomp = build_arrangement([p, q], 2)
        assert len(decomp.hyperplanes) == 1
        assert len(decomp.cells) == 2


class TestArrangement3D:
    def test_axis_plane_split(self):
        decomp = build_arrangement([Hyperplane((1, 0, 0), rat(1, 3))], 3)
        vols = sorted(cell.volume() for cell in decomp.cells)
        assert vols == [rat(1, 3), rat(2, 3)]

    def test_pyramid_style_planes_partition(self):
        rng = random.Random(107)
        planes = []
        for _ in range(3):
            coeffs = [0, 0, 0]
            i, j = rng.sample(range(3), 2)
            coeffs[i] = rng.choice((-1, 1))
            coeffs[j] = rng.choice((-1, 1))
            planes.append(
                Hyperplane(tuple(coeffs), rat(rng.randint(-4, 4), 4)).canonical()
            )
        decomp = build_arrangement(dedupe_canonical(planes), 3)
        assert decomp.total_volume() == 1


class TestTrackedCells:
    def test_unit_cube_cell(self):
        reg = PlaneRegistry(2)
        cell = TrackedCell.unit_cube(reg)
        assert cell.volume() == 1
        assert cell.contains((rat(1, 2), rat(1, 2)))

    def test_split_volumes_sum(self):
        reg = PlaneRegistry(2)
        cell = TrackedCell.unit_cube(reg)
        pid = reg.register(Hyperplane((1, -1), rat(0)))
        neg, pos = cell.split(pid)
        assert neg is not None and pos is not None
        assert neg.volume() + pos.volume() == cell.volume()

    def test_clip_away_everything(self):
        reg = PlaneRegistry(2)
        cell = TrackedCell.unit_cube(reg)
        pid = reg.register(Hyperplane((1, 0), rat(2)))
        assert cell.clip(pid, 1) is None

    def test_jsonable_dump(self):
        decomp = build_arrangement([Hyperplane((1, 0), rat(1, 2))], 2)
        doc = decomp.to_jsonable()
        assert doc["d"] == 2
        assert len(doc["cells"]) == 2
        for cell in doc["cells"]:
            assert set(cell) >= {"sign_vector", "volume", "witness"}


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("LINF_FIXPOINT_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("LINF_FIXPOINT_THREADS", "not a number")
    assert worker_count() == 1
    monkeypatch.delenv("LINF_FIXPOINT_THREADS")
    assert worker_count() >= 1
