import json
import random

import pytest

from linf_fixpoint.errors import (
    DimensionMismatchError,
    InstanceFormatError,
    RangeViolationError,
)
from linf_fixpoint.geometry import linf_dist
from linf_fixpoint.instances import (
    ToyGameNode,
    affine_instance,
    load_instance,
    random_affine,
    toygame_instance,
)
from linf_fixpoint.rational import rat

from .oracles import affine_fixed_point
from .support import affine_to_fracs, to_frac, to_rat

FIXTURES = "src/linf_fixpoint/fixtures"


def vec(*parts):
    return tuple(rat(p) for p in parts)


class TestAffineInstance:
    def test_query_evaluates_map(self):
        inst = affine_instance([["1/2"]], ["1/4"], lam=rat(1, 2))
        assert inst.query(vec("1/2")) == vec("1/2")

    def test_query_counting(self):
        inst = affine_instance([["1/2"]], ["1/4"], lam=rat(1, 2))
        assert inst.queries == 0
        inst.query(vec(0))
        inst.query(vec(1))
        assert inst.queries == 2
        assert inst.query_count == 2

    def test_repeated_points_count_every_time(self):
        inst = affine_instance([["1/2"]], ["1/4"], lam=rat(1, 2))
        for _ in range(3):
            inst.query(vec(0))
        assert inst.query_count == 3

    def test_declared_lam_must_cover_row_norm(self):
        with pytest.raises(InstanceFormatError):
            affine_instance([["3/4", "1/2"], ["0", "1/2"]], ["0", "0"], lam=rat(1, 2))

    def test_query_rejects_outside_cube(self):
        inst = affine_instance([["1/2"]], ["1/4"], lam=rat(1, 2))
        with pytest.raises(RangeViolationError):
            inst.query(vec("3/2"))

    def test_query_rejects_wrong_dimension(self):
        inst = affine_instance([["1/2"]], ["1/4"], lam=rat(1, 2))
        with pytest.raises(DimensionMismatchError):
            inst.query(vec(0, 0))

    def test_output_clamped_to_cube(self):
        inst = affine_instance([["0"]], ["2"], lam=rat(0))
        assert inst.query(vec(0)) == vec(1)


class TestRandomAffine:
    def test_declared_modulus_is_honest(self):
        rng = random.Random(0)
        for _ in range(10):
            d = rng.choice((1, 2, 3))
            lam = rat(rng.choice(("1/2", "9/10", "99/100")))
            inst = random_affine(d, lam, rng.randint(0, 10**6))
            assert inst.lam == lam
            assert inst.fn.row_norm() <= lam

    def test_fixed_point_is_fixed_and_interior(self):
        for seed in range(8):
            inst = random_affine(2, rat(9, 10), seed)
            x = inst.fixed_point
            assert x is not None
            assert all(0 <= v <= 1 for v in x)
            assert inst.fn(x) == x

    def test_fixed_point_matches_linear_solve_oracle(self):
        for seed in (3, 17, 92):
            inst = random_affine(2, rat(3, 4), seed)
            rows, offset = affine_to_fracs(inst)
            expected = affine_fixed_point(rows, offset)
            assert expected is not None
            assert tuple(to_rat(v) for v in expected) == inst.fixed_point

    def test_reproducible(self):
        a = random_affine(2, rat(9, 10), 5)
        b = random_affine(2, rat(9, 10), 5)
        assert a.fn.rows == b.fn.rows
        assert a.fn.offset == b.fn.offset


class TestToyGame:
    def three_nodes(self):
        return [
            ToyGameNode("max", (0, 1), None, rat(1, 10), rat(9, 10)),
            ToyGameNode("min", (1, 2), None, rat(0), rat(9, 10)),
            ToyGameNode(
                "avg", (0, 2), (rat(1, 2), rat(1, 2)), rat(1, 20), rat(9, 10)
            ),
        ]

    def test_modulus_is_max_discount(self):
        inst = toygame_instance(self.three_nodes())
        assert inst.lam == rat(9, 10)

    def test_operator_value(self):
        inst = toygame_instance(self.three_nodes())
        v = vec("1/2", "1/4", "3/4")
        out = inst.query(v)
        assert out[0] == rat(1, 10) + rat(9, 10) * rat(1, 2)
        assert out[1] == rat(9, 10) * rat(1, 4)
        assert out[2] == rat(1, 20) + rat(9, 10) * rat(5, 8)

    def test_contraction_property_on_samples(self):
        inst = toygame_instance(self.three_nodes())
        rng = random.Random(13)
        for _ in range(20):
            a = tuple(rat(rng.randint(0, 8), 8) for _ in range(3))
            b = tuple(rat(rng.randint(0, 8), 8) for _ in range(3))
            assert linf_dist(inst.fn(a), inst.fn(b)) <= inst.lam * linf_dist(a, b)

    def test_avg_weights_must_sum_to_one(self):
        nodes = self.three_nodes()
        nodes[2] = ToyGameNode(
            "avg", (0, 2), (rat(1, 2), rat(1, 3)), rat(0), rat(9, 10)
        )
        with pytest.raises(InstanceFormatError):
            toygame_instance(nodes)

    def test_successor_out_of_range(self):
        nodes = self.three_nodes()
        nodes[0] = ToyGameNode("max", (0, 5), None, rat(0), rat(9, 10))
        with pytest.raises(InstanceFormatError):
            toygame_instance(nodes)

    def test_node_count_capped(self):
        nodes = [
            ToyGameNode("max", (0,), None, rat(0), rat(1, 2)) for _ in range(5)
        ]
        with pytest.raises(InstanceFormatError):
            toygame_instance(nodes)


class TestLoadInstance:
    def test_oscillator_fixture(self):
        inst = load_instance(f"{FIXTURES}/affine-d1-oscillator.json")
        assert inst.d == 1
        assert inst.lam == rat(999, 1000)
        assert inst.fixed_point == vec("1/2")

    def test_mixing_fixture(self):
        inst = load_instance(f"{FIXTURES}/affine-d2-mixing.json")
        assert inst.d == 2
        assert inst.query(inst.fixed_point) == inst.fixed_point

    def test_toygame_fixture(self):
        inst = load_instance(f"{FIXTURES}/toygame-three-states.json")
        assert inst.d == 3
        assert inst.lam == rat(9, 10)

    def test_dict_form(self):
        inst = load_instance(
            {
                "type": "affine",
                "A": [["1/2"]],
                "b": ["1/4"],
                "lambda": "1/2",
            }
        )
        assert inst.query(vec("1/2")) == vec("1/2")

    def test_declared_fixed_point_validated(self):
        with pytest.raises(InstanceFormatError):
            load_instance(
                {
                    "type": "affine",
                    "A": [["1/2"]],
                    "b": ["1/4"],
                    "lambda": "1/2",
                    "fixed_point": ["3/4"],
                }
            )

    def test_unknown_kind_rejected(self):
        with pytest.raises(InstanceFormatError):
            load_instance({"type": "quadratic"})

    def test_bad_file_contents(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(json.dumps({"A": [["1/2"]]}))
        with pytest.raises(InstanceFormatError):
            load_instance(path)


class TestQueryChains:
    def test_wrapper_base_chain_counts_once(self):
        from linf_fixpoint.solver import lambda_cap_reduction

        inst = affine_instance([["1"]], ["0"], lam=rat(1))
        wrapped, half = lambda_cap_reduction(inst, rat(1, 10))
        assert half == rat(1, 20)
        wrapped.query(vec("1/2"))
        assert inst.queries == 1
        assert wrapped.queries == 0
        assert wrapped.query_count == 1
