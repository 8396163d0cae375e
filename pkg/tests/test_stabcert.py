import pytest
from fractions import Fraction

import numpy as np

from src.algebra.linalg import det, identity, rank
from src.algebra.subspace import SubspaceModel, plucker_coordinates
from src.errors import BadParameter, EmptyNearSet, HeightOverflow, InvalidMeasureFile, NotSymmetric, ParseError
from src.stabcert import (
    SubspaceCertifier, WordBall, free_ball_size, height_ledger, ledger_modulus, load_generators, near_distance,
    non_pure_witness, parse_generators, plucker_relations, pure_tensor_subspace, solve_stabilizer_system,
    stabilizer_system, wedge_power, word_ball
)


class MockSettings:
    """Mock settings for testing"""
    def __init__(self):
        self.exact_height_bits = 4096


def matrix(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def rotation(c, s):
    return matrix([[c, -s], [s, c]])


def block_diagonal(a, b):
    """Block diagonal matrix of two 2x2 blocks"""
    return matrix([list(a[0]) + [0, 0], list(a[1]) + [0, 0], [0, 0] + list(b[0]), [0, 0] + list(b[1])])


def transpose(m):
    return tuple(zip(*m))


SANOV = [
    matrix([[1, 2], [0, 1]]), matrix([[1, -2], [0, 1]]),
    matrix([[1, 0], [2, 1]]), matrix([[1, 0], [-2, 1]]),
]

R1 = rotation(Fraction(3, 5), Fraction(4, 5))
R2 = rotation(Fraction(5, 13), Fraction(12, 13))


def block_generators():
    """Rotations of two orthogonal planes by different angles, with inverses"""
    g1, g2 = block_diagonal(R1, R2), block_diagonal(R2, R1)
    return [g1, transpose(g1), g2, transpose(g2)]


def mixing_generators():
    """(x, y) -> (x, x + y) on R^2 + R^2, which moves the first plane"""
    f = matrix([[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1]])
    f_inv = matrix([[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 1, 0], [0, -1, 0, 1]])
    return [f, f_inv]


class TestWordBall:

    def test_radius_zero(self):
        ball = word_ball(SANOV, 0)
        assert len(ball) == 1
        assert ball.matrices == [identity(2)]

    @pytest.mark.parametrize("radius", [1, 2, 3, 4])
    def test_free_group_counts(self, radius):
        assert len(word_ball(SANOV, radius)) == free_ball_size(4, radius) == 1 + 4 * (3 ** radius - 1) // 2

    def test_relation_collapses_ball(self):
        minus = matrix([[-1, 0], [0, -1]])
        generators = [minus, SANOV[0], SANOV[1]]
        assert len(word_ball(generators, 2)) < free_ball_size(3, 2)

    def test_words_are_shortest(self):
        ball = word_ball(SANOV, 3)
        for n, level in enumerate(ball.levels):
            assert all(len(word) == n for _, word in level)

    def test_requires_inverses(self):
        with pytest.raises(ValueError):
            word_ball(SANOV[:1], 2)

    def test_height_budget(self):
        with pytest.raises(HeightOverflow):
            word_ball(SANOV, 5, height_budget=3)


class TestPluckerRelations:

    def test_grassmannian_of_planes_in_four_space(self):
        system = plucker_relations(4, 2)
        assert system.to_dict()['relations'] == ["p12*p34 - p13*p24 + p14*p23"]

    @pytest.mark.parametrize("d,ell", [(4, 2), (5, 2), (5, 3), (6, 3)])
    def test_pure_tensors_satisfy_relations(self, d, ell):
        system = plucker_relations(d, ell)
        rng = np.random.default_rng(d * 10 + ell)
        checked = 0
        while checked < 100:
            basis = [[int(x) for x in row] for row in rng.integers(-5, 6, size=(ell, d))]
            u = plucker_coordinates(matrix(basis))
            if all(x == 0 for x in u):
                continue
            assert system.is_pure(u)
            checked += 1

    @pytest.mark.parametrize("d,ell", [(4, 2), (5, 2), (5, 3), (6, 3), (6, 4)])
    def test_non_pure_tensor_is_detected(self, d, ell):
        witness = non_pure_witness(d, ell)
        assert not plucker_relations(d, ell).is_pure(witness)
        assert len(pure_tensor_subspace(witness, d, ell)) < ell

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_every_vector_is_pure_at_the_extremes(self, d):
        assert plucker_relations(d, 1).relations == []
        assert plucker_relations(d, d).relations == []
        assert non_pure_witness(d, 1) is None

    def test_pure_tensor_subspace_recovers_span(self):
        basis = matrix([[1, 2, 0, -1], [0, 1, 3, 1]])
        recovered = pure_tensor_subspace(plucker_coordinates(basis), 4, 2)
        assert len(recovered) == 2
        assert rank(basis + tuple(recovered)) == 2


class TestWedgePower:

    def test_extreme_powers(self):
        g = matrix([[2, 1, 0], [1, 1, 1], [0, 3, 1]])
        assert wedge_power(g, 1) == g
        assert wedge_power(g, 3) == ((det(g),),)

    def test_multiplicative(self):
        a, b = block_generators()[0], mixing_generators()[0]
        ab = tuple(tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4))
        wa, wb = wedge_power(a, 2), wedge_power(b, 2)
        product = tuple(tuple(sum(wa[i][k] * wb[k][j] for k in range(6)) for j in range(6)) for i in range(6))
        assert wedge_power(ab, 2) == product


class TestStabilizerSystem:

    def test_identity_gives_zero_map(self):
        system = stabilizer_system((0, 1), identity(4))
        assert all(x == 0 for row in system.linear for x in row)
        assert all(x == 0 for x in system.constant)

    def test_diagonal_matrix(self):
        g = matrix([[2, 0], [0, Fraction(1, 2)]])
        system = stabilizer_system((0,), g)
        # the pivot coordinate is pinned to 1, so (2 - 1) * 1 never vanishes
        assert system((Fraction(0),)) == (1, 0)
        assert system((Fraction(4),)) == (1, -2)

    def test_affine_structure(self):
        g = mixing_generators()[0]
        system = stabilizer_system((0, 1), g)
        v = tuple(Fraction(k, 3) for k in range(5))
        w = tuple(Fraction(1 - k, 7) for k in range(5))
        difference = tuple(x - y for x, y in zip(system(v), system(w)))
        linear_part = tuple(sum(row[j] * (v[j] - w[j]) for j in range(5)) for row in system.linear)
        assert difference == linear_part

    def test_solution_dimension_does_not_depend_on_pivot(self):
        generators = block_generators()
        first = solve_stabilizer_system(generators, (0, 1))
        second = solve_stabilizer_system(generators, (2, 3))
        assert len(first[1]) == len(second[1]) == 1


class TestHeightLedger:

    def test_modulus(self):
        q, lcm, magnitude = ledger_modulus(SANOV)
        assert (q, lcm, magnitude) == (5, 1, 2.0)

    def test_half_integer_generators(self):
        a = matrix([[Fraction(1, 2), 1], [0, 2]])
        a_inv = matrix([[2, -1], [0, Fraction(1, 2)]])
        ball = word_ball([a, a_inv], 10)
        ledger = height_ledger(ball)
        assert ledger.sound
        assert ledger.submultiplicative
        assert height_ledger(ball, q=4).sound

    def test_unit_entries(self):
        generators = [matrix([[1, 1], [0, 1]]), matrix([[1, -1], [0, 1]]),
                      matrix([[1, 0], [1, 1]]), matrix([[1, 0], [-1, 1]])]
        ball = word_ball(generators, 5)
        ledger = height_ledger(ball)
        assert ledger.q == 3
        assert ledger.sound
        assert ledger.submultiplicative
        assert not height_ledger(ball, q=1).sound

    def test_plane_ledger_uses_exterior_square(self):
        halve = matrix([[Fraction(1, 2), 0, 0], [0, Fraction(1, 2), 0], [0, 0, 1]])
        double = matrix([[2, 0, 0], [0, 2, 0], [0, 0, 1]])
        ball = word_ball([halve, double], 1)
        assert ledger_modulus([halve, double], 2) == (100, 2, 2.0)
        # wedge^2 halve has the entry 1/4, so q = 2 covers lines but not planes
        assert height_ledger(ball, q=2).sound
        ledger = height_ledger(ball, q=2, ell=2)
        assert not ledger.sound
        assert not ledger.records[1]['integral']
        assert height_ledger(ball, ell=2).sound

    def test_plane_ledger_on_noncommuting_generators(self):
        halve = matrix([[Fraction(1, 2), 0, 0], [0, Fraction(1, 2), 0], [0, 0, 1]])
        double = matrix([[2, 0, 0], [0, 2, 0], [0, 0, 1]])
        cycle = matrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
        ball = word_ball([halve, double, cycle, transpose(cycle)], 5)
        ledger = height_ledger(ball, ell=2)
        assert ledger.q == 100
        assert ledger.ell == 2
        assert len(ledger.records) == 6
        assert ledger.sound
        assert ledger.submultiplicative

    def test_exterior_power_out_of_range(self):
        with pytest.raises(ValueError):
            ledger_modulus(SANOV, 3)


class TestCertification:

    def setup_method(self):
        self.certifier = SubspaceCertifier(MockSettings())

    def test_exact_stabilizers_return_the_plane(self):
        plane = SubspaceModel.from_basis(matrix([[1, 0, 0, 0], [0, 1, 0, 0]]))
        ball = self.certifier.word_ball(block_generators(), 2)
        certificate = self.certifier.certify_common_invariant_subspace(ball, plane, 1e-6)
        assert certificate.certified
        assert certificate.subspace.plucker == plane.plucker
        assert certificate.sign_mode == "plus"
        assert len(certificate.near_set) == len(ball)

    def test_block_diagonal_scenario_recovers_exact_plane(self):
        exact = SubspaceModel.from_basis(matrix([[1, 0, 0, 0], [0, 1, 0, 0]]))
        guess = SubspaceModel.from_basis(matrix([[1, 0, 0, 0], [0, 1, Fraction(1, 1000), 0]]))
        ball = self.certifier.word_ball(block_generators() + mixing_generators(), 3)
        certificate = self.certifier.certify_common_invariant_subspace(ball, guess, 0.01)
        assert certificate.certified
        assert certificate.subspace.plucker == exact.plucker
        assert certificate.solution_dimension == 1
        near_words = [word for _, word, _ in certificate.near_set]
        assert all(4 not in word and 5 not in word for word in near_words)
        block_only = [word for _, word in ball.elements if 4 not in word and 5 not in word]
        assert len(near_words) == len(block_only)
        for m, _, _ in certificate.near_set:
            assert certificate.subspace.invariance_factor(m) == 1

    def test_degenerate_near_set(self):
        line = SubspaceModel.from_basis(matrix([[3, 1]]))
        ball = self.certifier.word_ball(SANOV, 2)
        certificate = self.certifier.certify_common_invariant_subspace(ball, line, 1e-3)
        assert certificate.degenerate
        assert [word for _, word, _ in certificate.near_set] == [()]
        assert certificate.subspace.plucker == line.plucker
        assert certificate.warnings

    def test_sign_flipped_system(self):
        minus = matrix([[-1, 0], [0, -1]])
        line = SubspaceModel.from_basis(matrix([[1, 0]]))
        ball = self.certifier.word_ball([minus], 1)
        certificate = self.certifier.certify_common_invariant_subspace(ball, line, 0.5)
        assert certificate.certified
        assert certificate.sign_mode == "signed"
        assert certificate.subspace.plucker == line.plucker

    def test_no_common_invariant_line(self):
        line = SubspaceModel.from_basis(matrix([[1, 0]]))
        ball = self.certifier.word_ball(SANOV, 1)
        certificate = self.certifier.certify_common_invariant_subspace(ball, line, 10.0)
        assert certificate.subspace is None
        assert not certificate.certified

    def test_empty_near_set(self):
        b = SANOV[2]
        ball = WordBall(generators=SANOV, radius=1, levels=[[(b, (2,))]])
        line = SubspaceModel.from_basis(matrix([[1, 0]]))
        with pytest.raises(EmptyNearSet):
            self.certifier.certify_common_invariant_subspace(ball, line, 0.5)

    def test_threshold_must_be_positive(self):
        ball = self.certifier.word_ball(SANOV, 1)
        line = SubspaceModel.from_basis(matrix([[1, 0]]))
        with pytest.raises(BadParameter):
            self.certifier.certify_common_invariant_subspace(ball, line, 0.0)

    def test_near_distance_of_identity(self):
        line = SubspaceModel.from_basis(matrix([[1, 2]]))
        assert near_distance(identity(2), line) == (0.0, 1)


class TestGeneratorFile:

    def test_inverses_are_added(self):
        generator_set = parse_generators({'matrices': [[["1", "2"], ["0", "1"]]], 'add_inverses': True,
                                          'subspace': [["1", "0"]], 'label': "upper"})
        assert generator_set.generators == [matrix([[1, 2], [0, 1]]), matrix([[1, -2], [0, 1]])]
        assert generator_set.subspace == [(Fraction(1), Fraction(0))]
        assert generator_set.label == "upper"

    def test_asymmetric_set(self):
        with pytest.raises(NotSymmetric):
            parse_generators({'matrices': [[["1", "2"], ["0", "1"]]]})

    def test_bad_entry_has_pointer(self):
        with pytest.raises(ParseError) as exc:
            parse_generators({'matrices': [[["1", "0"], ["x", "1"]]]})
        assert exc.value.details['pointer'] == "/matrices/0/1/0"

    def test_singular_matrix(self):
        with pytest.raises(ParseError):
            parse_generators({'matrices': [[["1", "1"], ["1", "1"]]]})

    def test_subspace_length(self):
        with pytest.raises(ParseError):
            parse_generators({'matrices': [[["-1", "0"], ["0", "-1"]]], 'subspace': [["1", "0", "0"]]})

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "generators.json"
        path.write_text('{"matrices": [[["-1", "0"], ["0", "-1"]]]}')
        assert len(load_generators(path).generators) == 1
        path.write_text('{"matrices": [')
        with pytest.raises(InvalidMeasureFile) as exc:
            load_generators(path)
        assert exc.value.details['line'] == 1
        with pytest.raises(InvalidMeasureFile):
            load_generators(tmp_path / "missing.json")


if __name__ == "__main__":
    pytest.main([__file__])
