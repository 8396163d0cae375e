import json
import pytest
from fractions import Fraction

import numpy as np

from src.algebra import QuadraticScalar
from src.errors import InvalidMeasureFile, NotProbability, NotSymmetric, ParseError
from src.measures import GroupElement, MeasureSpec, load_measure, parse_measure, quaternion_distance


def pythagorean_measure_data(symmetric=True):
    """Symmetric measure on two rational quaternions and their inverses"""
    return {
        'group': "SU2",
        'symmetric': symmetric,
        'atoms': [
            {'quaternion': ["3/5", "4/5", "0", "0"], 'weight': "1/4"},
            {'quaternion': ["3/5", "-4/5", "0", "0"], 'weight': "1/4"},
            {'quaternion': ["0", "3/5", "4/5", "0"], 'weight': "1/4"},
            {'quaternion': ["0", "-3/5", "-4/5", "0"], 'weight': "1/4"},
        ]
    }


class TestGroupElement:

    def test_exact_multiplication(self):
        g = GroupElement.from_quaternion([Fraction(3, 5), Fraction(4, 5), 0, 0])
        h = GroupElement.from_quaternion([0, Fraction(3, 5), Fraction(4, 5), 0])
        product = g * h
        assert product.exact
        product.validate()
        assert (g * g.inverse()).is_identity()

    def test_rotation_is_a_homomorphism(self):
        g = GroupElement.from_quaternion([Fraction(1, 3), Fraction(2, 3), Fraction(2, 3), 0])
        h = GroupElement.from_quaternion([Fraction(3, 5), 0, 0, Fraction(4, 5)])
        lhs = np.array((g * h).rotation, dtype=float)
        rhs = np.array(g.rotation, dtype=float) @ np.array(h.rotation, dtype=float)
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_non_unit_quaternion_rejected(self):
        with pytest.raises(ValueError):
            GroupElement.from_quaternion([1, 1, 0, 0])

    def test_non_rotation_rejected(self):
        with pytest.raises(ValueError):
            GroupElement.from_matrix([[1, 0, 0], [0, 1, 0], [0, 0, -1]])

    def test_quadratic_entries(self):
        half = Fraction(1, 2)
        root = QuadraticScalar(0, half, 2)
        g = GroupElement.from_quaternion([root, root, 0, 0])
        assert g.exact
        g4 = g * g * g * g
        assert np.allclose(g4.float_quaternion, [-1, 0, 0, 0])
        assert not g4.is_identity()
        assert (g4 * g4).is_identity()

    def test_float_lift_distance(self):
        g = GroupElement.from_quaternion([Fraction(3, 5), Fraction(4, 5), 0, 0])
        assert quaternion_distance(g.float_quaternion, -g.float_quaternion)[0] == pytest.approx(0.0, abs=1e-12)


class TestMeasureSpec:

    def test_dirac(self):
        mu = MeasureSpec.dirac("SO3").validate()
        assert mu.size == 1
        assert mu.exact

    def test_weights_must_sum_to_one(self):
        atoms = [GroupElement.identity(), GroupElement.identity()]
        with pytest.raises(NotProbability):
            MeasureSpec(group="SU2", atoms=atoms, weights=[Fraction(1, 2), Fraction(1, 3)]).validate()

    def test_nonpositive_weight(self):
        atoms = [GroupElement.identity(), GroupElement.identity()]
        with pytest.raises(NotProbability):
            MeasureSpec(group="SU2", atoms=atoms, weights=[Fraction(3, 2), Fraction(-1, 2)]).validate()

    def test_symmetric_uniform(self):
        g = GroupElement.from_quaternion([Fraction(3, 5), Fraction(4, 5), 0, 0])
        mu = MeasureSpec.symmetric_uniform([g])
        assert mu.size == 2
        assert mu.symmetric

    def test_declared_symmetric_but_not(self):
        g = GroupElement.from_quaternion([Fraction(3, 5), Fraction(4, 5), 0, 0])
        with pytest.raises(NotSymmetric):
            MeasureSpec(group="SU2", atoms=[g], weights=[Fraction(1)], symmetric=True).validate()


class TestLoader:

    def test_parse_symmetric_measure(self):
        mu = parse_measure(pythagorean_measure_data())
        assert mu.size == 4
        assert sum(mu.weights) == 1
        assert mu.exact

    def test_so3_quaternion_atoms_become_matrices(self):
        data = pythagorean_measure_data()
        data['group'] = "SO3"
        mu = parse_measure(data)
        assert all(atom.matrix is not None for atom in mu.atoms)
        assert mu.atoms[0].matrix[0][0] == 1

    def test_matrix_atom(self):
        data = {
            'group': "SO3",
            'atoms': [{'matrix': [["3/5", "-4/5", "0"], ["4/5", "3/5", "0"], ["0", "0", "1"]], 'weight': "1"}]
        }
        mu = parse_measure(data)
        assert mu.atoms[0].matrix[1][0] == Fraction(4, 5)

    def test_zero_denominator_points_at_field(self):
        data = pythagorean_measure_data()
        data['atoms'][0]['weight'] = "1/0"
        with pytest.raises(ParseError) as exc:
            parse_measure(data)
        assert exc.value.details['pointer'] == "/atoms/0/weight"

    def test_bad_entry_pointer(self):
        data = pythagorean_measure_data()
        data['atoms'][2]['quaternion'][1] = "three fifths"
        with pytest.raises(ParseError) as exc:
            parse_measure(data)
        assert exc.value.details['pointer'] == "/atoms/2/quaternion/1"

    def test_weights_not_summing_to_one(self):
        data = pythagorean_measure_data()
        data['atoms'][0]['weight'] = "1/2"
        with pytest.raises(NotProbability):
            parse_measure(data)

    def test_asymmetric_weights(self):
        data = pythagorean_measure_data()
        data['atoms'][0]['weight'] = "1/8"
        data['atoms'][1]['weight'] = "3/8"
        with pytest.raises(NotSymmetric):
            parse_measure(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidMeasureFile):
            load_measure(tmp_path / "missing.json")

    def test_invalid_json_reports_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"group": "SU2",\n "atoms": [}')
        with pytest.raises(InvalidMeasureFile) as exc:
            load_measure(path)
        assert exc.value.details['line'] == 2
        assert exc.value.exit_code == 1

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "measure.json"
        path.write_text(json.dumps(pythagorean_measure_data()))
        mu = load_measure(path)
        assert mu.symmetric
        assert mu.to_dict()['atoms'][0]['weight'] == "1/4"


if __name__ == "__main__":
    pytest.main([__file__])
