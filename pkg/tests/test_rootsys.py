import json
import pytest
from fractions import Fraction

from src.errors import InadmissibleSpec, GroupTooLarge, NotDominant
from src.rootsys import (
    RootSystemSpec, build_root_system, root_system, weyl_group, weyl_group_order, weyl_stabilizer,
    weyl_dimension, classify_highest_root, dual_weight, dimension_constant,
    Fundamental, SumDual, to_json, expected_root_count
)


def all_types(max_rank=8):
    """Every admissible irreducible type up to the given rank"""
    types = []
    for rank in range(1, max_rank + 1):
        types.append(("A", rank))
    for family in ("B", "C"):
        for rank in range(2, max_rank + 1):
            types.append((family, rank))
    for rank in range(4, max_rank + 1):
        types.append(("D", rank))
    for rank in (6, 7, 8):
        if rank <= max_rank:
            types.append(("E", rank))
    if max_rank >= 4:
        types.append(("F", 4))
    types.append(("G", 2))
    return types


class TestRootSystemSpec:

    @pytest.mark.parametrize("family,rank", [("D", 3), ("E", 5), ("E", 9), ("F", 3),
                                             ("G", 3), ("A", 0), ("X", 2), ("B", 1)])
    def test_inadmissible_specs_rejected(self, family, rank):
        with pytest.raises(InadmissibleSpec):
            RootSystemSpec(family, rank)

    def test_parse_name(self):
        spec = RootSystemSpec.parse("e6")
        assert spec.family == "E"
        assert spec.rank == 6
        assert spec.name == "E6"

    def test_error_code_names_module(self):
        with pytest.raises(InadmissibleSpec) as info:
            RootSystemSpec("Q", 2)
        assert info.value.code == "rootsys.InadmissibleSpec"
        assert info.value.exit_code == 2


class TestBuildRootSystem:

    def test_build_from_spec(self):
        rs = build_root_system(RootSystemSpec("B", 3))
        assert rs.name == "B3"
        assert len(rs.all_roots) == expected_root_count(RootSystemSpec("B", 3)) == 18

    def test_a1_has_two_roots_and_one_weight(self):
        rs = root_system("A", 1)
        assert len(rs.all_roots) == 2
        assert len(rs.fundamental_weights) == 1
        alpha = rs.simple_roots[0]
        assert set(rs.all_roots) == {alpha, tuple(-x for x in alpha)}

    def test_g2_long_and_short_roots(self):
        rs = root_system("G", 2)
        lengths = [rs.inner(r, r) for r in rs.all_roots]
        assert len(rs.all_roots) == 12
        assert lengths.count(Fraction(2)) == 6
        assert lengths.count(Fraction(2, 3)) == 6

    def test_e8_has_240_roots(self):
        rs = root_system("E", 8)
        assert len(rs.all_roots) == 240

    @pytest.mark.parametrize("family,rank", all_types(6))
    def test_classical_root_counts(self, family, rank):
        rs = root_system(family, rank)
        assert len(rs.all_roots) == expected_root_count(rs.spec)

    @pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4)])
    def test_lattice_invariants(self, family, rank):
        rs = root_system(family, rank)

        # Cartan integers
        for root in rs.all_roots:
            for alpha in rs.simple_roots:
                assert rs.coroot_pairing(root, alpha).denominator == 1

        # fundamental weights are dual to simple coroots
        for i, omega in enumerate(rs.fundamental_weights):
            for j, alpha in enumerate(rs.simple_roots):
                assert rs.coroot_pairing(omega, alpha) == (1 if i == j else 0)

        # reflection closure
        for alpha in rs.all_roots:
            for beta in rs.all_roots:
                assert rs.is_root(rs.reflect(beta, alpha))

        # highest root dominates every root and is longest
        theta = rs.highest_root
        theta_coords = rs.simple_coords[rs.highest_root_index]
        for k, root in enumerate(rs.all_roots):
            assert all(t - c >= 0 for t, c in zip(theta_coords, rs.simple_coords[k]))
            assert rs.inner(theta, theta) >= rs.inner(root, root)

    def test_long_roots_have_squared_length_two(self):
        for family, rank in [("B", 3), ("C", 3), ("F", 4), ("G", 2), ("E", 6)]:
            rs = root_system(family, rank)
            assert max(rs.inner(r, r) for r in rs.all_roots) == 2

    def test_rho_is_half_sum_of_positive_roots(self):
        rs = root_system("B", 3)
        total = [Fraction(0)] * rs.ambient_dim
        for root in rs.positive_roots:
            total = [t + x for t, x in zip(total, root)]
        assert tuple(t / 2 for t in total) == rs.rho

    def test_json_export(self):
        rs = root_system("A", 2)
        data = json.loads(json.dumps(to_json(rs)))
        assert data['family'] == "A"
        assert data['rank'] == 2
        assert len(data['roots']) == 6
        assert all(len(pair) == 2 for root in data['roots'] for pair in root)


class TestClassifyHighestRoot:

    def test_a3_sum_of_dual_pair(self):
        result = classify_highest_root(root_system("A", 3))
        assert isinstance(result, SumDual)
        assert (result.index, result.dual_index) == (0, 2)
        assert not result.self_dual

    def test_a1_twice_self_dual_weight(self):
        rs = root_system("A", 1)
        result = classify_highest_root(rs)
        assert isinstance(result, SumDual)
        assert result.self_dual
        assert rs.highest_root == tuple(2 * x for x in result.omega.coords)

    def test_g2_is_fundamental(self):
        rs = root_system("G", 2)
        result = classify_highest_root(rs)
        assert isinstance(result, Fundamental)
        assert result.omega.coords == rs.highest_root

    def test_distinct_dual_only_in_type_a(self):
        for family, rank in all_types(8):
            result = classify_highest_root(root_system(family, rank))
            distinct = isinstance(result, SumDual) and not result.self_dual
            assert distinct == (family == "A" and rank >= 2), f"{family}{rank}"

    def test_dual_weight_in_type_a(self):
        rs = root_system("A", 4)
        dual = dual_weight(rs, rs.fundamental_weights[1])
        assert dual.coords == rs.fundamental_weights[2]


class TestWeylGroup:

    @pytest.mark.parametrize("family,rank,order", [("A", 3, 24), ("B", 3, 48), ("G", 2, 12), ("F", 4, 1152)])
    def test_enumeration_matches_order(self, family, rank, order):
        rs = root_system(family, rank)
        assert weyl_group_order(rs) == order
        elements = weyl_group(rs)
        assert len(elements) == order
        assert len({w.permutation for w in elements}) == order

    @pytest.mark.slow
    def test_e6_enumeration(self):
        rs = root_system("E", 6)
        assert len(weyl_group(rs)) == 51840

    def test_elements_are_orthogonal_root_permutations(self):
        rs = root_system("B", 2)
        for w in weyl_group(rs):
            for k, root in enumerate(rs.all_roots):
                image = w.apply(root)
                assert image == rs.all_roots[w.permutation[k]]
            for u in rs.simple_roots:
                for v in rs.simple_roots:
                    assert rs.inner(w.apply(u), w.apply(v)) == rs.inner(u, v)

    def test_e8_exceeds_default_limit(self):
        with pytest.raises(GroupTooLarge):
            weyl_group(root_system("E", 8))

    def test_custom_limit(self):
        with pytest.raises(GroupTooLarge):
            weyl_group(root_system("B", 3), limit=10)


class TestWeylStabilizer:

    def test_a1_highest_root_stabilizer_trivial(self):
        rs = root_system("A", 1)
        stabilizer = weyl_stabilizer(rs, rs.highest_root)
        assert len(stabilizer) == 1
        assert stabilizer[0].is_identity

    def test_a2_highest_root_is_regular(self):
        # the highest root of A2 equals rho, so only the identity fixes it
        rs = root_system("A", 2)
        assert rs.highest_root == rs.rho
        assert len(weyl_stabilizer(rs, rs.highest_root)) == 1

    def test_b2_zero_vector(self):
        rs = root_system("B", 2)
        assert len(weyl_stabilizer(rs, (0, 0))) == 8

    @pytest.mark.parametrize("vector", [None, "negative", "generic"])
    def test_matches_brute_force(self, vector):
        rs = root_system("B", 3)
        if vector is None:
            v = rs.highest_root
        elif vector == "negative":
            v = tuple(-x for x in rs.fundamental_weights[0])
        else:
            v = (Fraction(-1), Fraction(0), Fraction(2))
        expected = {w.permutation for w in weyl_group(rs) if w.apply(v) == v}
        stabilizer = weyl_stabilizer(rs, v)
        assert {w.permutation for w in stabilizer} == expected
        assert all(w.apply(v) == v for w in stabilizer)

    def test_stabilizer_is_subgroup(self):
        rs = root_system("C", 3)
        stabilizer = weyl_stabilizer(rs, rs.highest_root)
        permutations = {w.permutation for w in stabilizer}
        for u in stabilizer:
            assert u.inverse().permutation in permutations
            for w in stabilizer:
                assert u.compose(w).permutation in permutations

    def test_e7_stabilizer_is_parabolic(self):
        # W(E7) itself is over the default limit; the highest root stabilizer is W(D6)
        rs = root_system("E", 7)
        assert len(weyl_stabilizer(rs, rs.highest_root)) == 23040


class TestWeylDimension:

    @pytest.mark.parametrize("m", [0, 1, 2, 5])
    def test_a1_spin_formula(self, m):
        rs = root_system("A", 1)
        assert weyl_dimension(rs, rs.weight_from_fw([m])) == m + 1

    def test_a2_fundamental(self):
        rs = root_system("A", 2)
        assert weyl_dimension(rs, rs.weight_from_fw([1, 0])) == 3
        assert weyl_dimension(rs, rs.weight_from_fw([3, 0])) == 10

    def test_g2_adjoint(self):
        rs = root_system("G", 2)
        assert weyl_dimension(rs, rs.highest_root) == 14

    @pytest.mark.parametrize("family,rank", all_types(8))
    def test_zero_weight_is_trivial(self, family, rank):
        rs = root_system(family, rank)
        assert weyl_dimension(rs, tuple(Fraction(0) for _ in range(rs.ambient_dim))) == 1

    @pytest.mark.parametrize("family,rank", [("A", 2), ("B", 3), ("D", 4), ("G", 2), ("F", 4)])
    def test_adjoint_dimension(self, family, rank):
        rs = root_system(family, rank)
        assert weyl_dimension(rs, rs.highest_root) == len(rs.all_roots) + rs.rank

    def test_not_dominant(self):
        rs = root_system("A", 2)
        with pytest.raises(NotDominant):
            weyl_dimension(rs, rs.weight_from_fw([-1, 0]))
        with pytest.raises(NotDominant):
            weyl_dimension(rs, rs.weight_from_fw([Fraction(1, 2), 0]))

    @pytest.mark.parametrize("family,rank", [("A", 3), ("B", 2), ("G", 2)])
    def test_dimension_lower_bound(self, family, rank):
        rs = root_system(family, rank)
        c = dimension_constant(rs)
        assert c > 0
        for coords in [(1,) + (0,) * (rank - 1), (0,) * (rank - 1) + (3,), (2,) * rank, (5,) + (1,) * (rank - 1)]:
            weight = rs.weight_from_fw(coords)
            assert weyl_dimension(rs, weight) >= c * rs.norm(weight.coords) - 1e-12


if __name__ == "__main__":
    pytest.main([__file__])
