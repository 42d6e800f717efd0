import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from linf_fixpoint.errors import (
    DimensionMismatchError,
    ZeroDirectionError,
)
from linf_fixpoint.geometry import (
    HalfspaceDir,
    Pyramid,
    SearchSpace,
    all_halfspace_directions,
    apex_pyramids,
    clamp_to_unit_cube,
    direction_from_displacement,
    halfspace_contains,
    halfspace_decompose,
    in_unit_cube,
    linf_dist,
    linf_norm,
    pyramid_contains,
    search_space_cut,
)
from linf_fixpoint.rational import rat

rat_coords = st.fractions(min_value=-2, max_value=2, max_denominator=64).map(
    lambda f: rat(int(f.numerator), int(f.denominator))
)


def vec(*parts):
    return tuple(rat(p) for p in parts)


class TestNorms:
    def test_worked_norm_value(self):
        assert linf_norm(vec("1/3", "-2/3", "1/2")) == rat(2, 3)

    def test_dist(self):
        assert linf_dist(vec(0, 1), vec(1, 0)) == 1
        assert linf_dist(vec("1/2", "1/2"), vec("1/4", "3/4")) == rat(1, 4)

    def test_dist_dimension_check(self):
        with pytest.raises(DimensionMismatchError):
            linf_dist(vec(0), vec(0, 0))

    @given(st.lists(rat_coords, min_size=1, max_size=4))
    def test_norm_is_max_abs(self, parts):
        v = tuple(parts)
        assert linf_norm(v) == max(abs(p) for p in v)


class TestCube:
    def test_membership(self):
        assert in_unit_cube(vec(0, 1, "1/2"))
        assert not in_unit_cube(vec("3/2", 0))
        assert not in_unit_cube(vec("-1/16",))

    def test_clamp(self):
        assert clamp_to_unit_cube(vec("3/2", "-1/4", "1/3")) == vec(1, 0, "1/3")


class TestPyramid:
    def test_contains_worked_example(self):
        p = Pyramid(0, -1, vec(1, 1))
        assert pyramid_contains(p, vec("3/10", "1/2"))
        assert not pyramid_contains(p, vec("1/2", "3/10"))

    def test_contains_is_norm_equality(self):
        p = Pyramid(1, 1, vec("1/2", "1/2"))
        assert pyramid_contains(p, vec("1/2", 1))
        assert pyramid_contains(p, vec("1/4", "3/4"))
        assert not pyramid_contains(p, vec("1/4", "5/8"))

    def test_apex_always_contained(self):
        p = Pyramid(0, 1, vec("1/3", "2/3"))
        assert pyramid_contains(p, p.apex)

    def test_apex_pyramids_count_and_order(self):
        ps = apex_pyramids(vec("1/2", "1/2", "1/2"))
        assert len(ps) == 6
        assert [(p.axis, p.sign) for p in ps] == [
            (0, 1), (0, -1), (1, 1), (1, -1), (2, 1), (2, -1),
        ]

    def test_invalid_sign_rejected(self):
        with pytest.raises(ValueError):
            Pyramid(0, 2, vec(0, 0))

    def test_axis_out_of_range_rejected(self):
        with pytest.raises(DimensionMismatchError):
            Pyramid(3, 1, vec(0, 0))

    @given(st.lists(rat_coords, min_size=2, max_size=3))
    def test_point_lies_in_some_pyramid_of_any_apex(self, parts):
        y = tuple(parts)
        apex = tuple(rat(0) for _ in parts)
        assert any(pyramid_contains(p, y) for p in apex_pyramids(apex))


class TestDirections:
    def test_direction_from_displacement(self):
        d = direction_from_displacement(vec(1, 0, "-1/3"))
        assert d.signs == (1, 0, -1)

    def test_zero_displacement_raises(self):
        with pytest.raises(ZeroDirectionError):
            direction_from_displacement(vec(0, 0))

    def test_all_directions_count(self):
        for d in (1, 2, 3):
            dirs = all_halfspace_directions(d)
            assert len(dirs) == 3**d - 1
            assert len(set(dirs)) == len(dirs)

    def test_all_zero_direction_rejected(self):
        with pytest.raises(ZeroDirectionError):
            HalfspaceDir((0, 0))

    def test_bad_entries_rejected(self):
        with pytest.raises(ValueError):
            HalfspaceDir((2, 0))


class TestHalfspaceDecomposition:
    def test_worked_decomposition(self):
        d = HalfspaceDir((1, 0))
        ps = halfspace_decompose(d, vec("1/2", "1/2"))
        assert {(p.axis, p.sign) for p in ps} == {(0, 1), (1, 1), (1, -1)}

    def test_size_bounds(self):
        x = vec("1/2", "1/2", "1/2")
        assert len(halfspace_decompose(HalfspaceDir((1, 1, 1)), x)) == 3
        assert len(halfspace_decompose(HalfspaceDir((1, 0, 0)), x)) == 5

    @given(
        st.lists(st.sampled_from([-1, 0, 1]), min_size=1, max_size=3).filter(
            lambda s: any(s)
        ),
        st.lists(rat_coords, min_size=3, max_size=3),
    )
    def test_union_of_pyramids_is_the_halfspace(self, signs, apex_parts):
        d = len(signs)
        direction = HalfspaceDir(tuple(signs))
        apex = tuple(apex_parts[:d])
        pyramids = halfspace_decompose(direction, apex)
        rng = random.Random(7)
        for _ in range(40):
            y = tuple(rat(rng.randint(-8, 8), 4) for _ in range(d))
            in_union = any(pyramid_contains(p, y) for p in pyramids)
            in_half = halfspace_contains(direction, apex, y)
            assert in_union == in_half


class TestSearchSpace:
    def test_unit_cube(self):
        s = SearchSpace.unit_cube(2)
        assert s.d == 2
        assert s.complexity == 0
        assert s.contains(vec("1/2", "1/2"))

    def test_contains_excludes_cut_interior(self):
        s = SearchSpace.unit_cube(2).with_cuts([Pyramid(0, 1, vec("1/2", "1/2"))])
        assert not s.contains(vec("3/4", "1/2"))
        assert s.contains(vec("1/4", "1/2"))

    def test_with_cuts_dedupes(self):
        p = Pyramid(0, 1, vec("1/2", "1/2"))
        s = SearchSpace.unit_cube(2).with_cuts([p]).with_cuts([p])
        assert s.complexity == 1

    def test_cut_grows_complexity_at_most_2d_minus_1(self):
        s = SearchSpace.unit_cube(3)
        s2 = search_space_cut(s, vec("1/2", "1/2", "1/2"), HalfspaceDir((1, 0, 0)))
        assert s2.complexity <= 5

    def test_cut_removes_far_side_keeps_near_side(self):
        s = SearchSpace.unit_cube(2)
        c = vec("1/2", "1/2")
        s2 = search_space_cut(s, c, HalfspaceDir((1, 1)))
        assert not s2.contains(vec("3/4", "3/4"))
        assert s2.contains(vec("1/4", "1/4"))

    def test_cut_dimension_check(self):
        with pytest.raises(DimensionMismatchError):
            search_space_cut(
                SearchSpace.unit_cube(2), vec("1/2",), HalfspaceDir((1, 1))
            )
