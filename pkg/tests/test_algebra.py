import pytest
from fractions import Fraction

from src.algebra import QuadraticScalar, SubspaceModel, parse_rational, parse_scalar, format_scalar, plucker_coordinates
from src.algebra.linalg import det, identity, inverse, matmul, nullspace, rank, solve_affine, wedge_power
from src.algebra.quadratic import exact_sqrt, field_of, height_bits, is_algebraic_integer, scalar_sign


def golden():
    """(1 + sqrt 5) / 2"""
    return QuadraticScalar(Fraction(1, 2), Fraction(1, 2), 5)


class TestRationals:

    @pytest.mark.parametrize("text,value", [("3/4", Fraction(3, 4)), ("-2", Fraction(-2)), (7, Fraction(7)),
                                            ([1, 3], Fraction(1, 3)), (" 5/10 ", Fraction(1, 2))])
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    @pytest.mark.parametrize("text", ["1/0", "one half", True, [1, 0], 0.5, "1/2/3"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            parse_rational(text)


class TestQuadraticScalar:

    def test_rational_results_collapse_to_fractions(self):
        x = golden()
        product = x * x.conjugate()
        assert isinstance(product, Fraction)
        assert product == x.norm() == -1

    def test_golden_ratio_identity(self):
        x = golden()
        assert x * x == x + 1

    def test_division(self):
        x = golden()
        assert x / x == 1
        assert (1 / x) == x - 1

    def test_exact_sign(self):
        assert scalar_sign(QuadraticScalar(3, -1, 5)) == 1
        assert scalar_sign(QuadraticScalar(2, -1, 5)) == -1
        assert QuadraticScalar(0, 1, 2) < Fraction(3, 2)
        assert abs(QuadraticScalar(1, -1, 2)) == QuadraticScalar(-1, 1, 2)

    def test_requires_squarefree_field(self):
        with pytest.raises(ValueError):
            QuadraticScalar(1, 1, 4)

    def test_mixed_fields(self):
        with pytest.raises(ValueError):
            QuadraticScalar(0, 1, 2) + QuadraticScalar(0, 1, 3)
        with pytest.raises(ValueError):
            field_of([QuadraticScalar(0, 1, 2), QuadraticScalar(0, 1, 3)])

    def test_algebraic_integers(self):
        assert is_algebraic_integer(golden())
        assert not is_algebraic_integer(QuadraticScalar(Fraction(1, 2), Fraction(1, 3), 5))
        assert is_algebraic_integer(Fraction(4))
        assert not is_algebraic_integer(Fraction(1, 2))

    def test_height_bits(self):
        assert height_bits(Fraction(255, 2)) == 8
        assert height_bits(QuadraticScalar(1, Fraction(1, 1024), 2)) == 11

    def test_exact_sqrt(self):
        assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert exact_sqrt(Fraction(5, 4), 5) == QuadraticScalar(0, Fraction(1, 2), 5)
        with pytest.raises(ValueError):
            exact_sqrt(2)

    def test_scalar_file_format(self):
        entry = {"rat": [1, 2], "quad": {"d": 5, "p2": 1, "q2": 2}}
        x = parse_scalar(entry)
        assert x == golden()
        assert format_scalar(x) == entry
        assert parse_scalar({"rat": [3, 4]}) == Fraction(3, 4)
        with pytest.raises(ValueError):
            parse_scalar({"rat": [1, 2], "cube": 3})


class TestLinearAlgebra:

    def test_inverse_over_quadratic_field(self):
        a = ((golden(), Fraction(1)), (Fraction(1), Fraction(0)))
        assert matmul(a, inverse(a)) == identity(2)

    def test_nullspace_and_rank(self):
        a = ((Fraction(1), Fraction(2), Fraction(3)), (Fraction(2), Fraction(4), Fraction(6)))
        assert rank(a) == 1
        basis = nullspace(a)
        assert len(basis) == 2
        for v in basis:
            assert all(sum(x * y for x, y in zip(row, v)) == 0 for row in a)

    def test_solve_affine(self):
        a = ((Fraction(1), Fraction(1)), (Fraction(1), Fraction(-1)))
        particular, kernel = solve_affine(a, (Fraction(3), Fraction(1)))
        assert particular == (2, 1)
        assert kernel == []
        inconsistent = ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(2)))
        assert solve_affine(inconsistent, (Fraction(1), Fraction(3))) is None

    def test_wedge_power_of_identity(self):
        assert wedge_power(identity(4), 2) == identity(6)

    def test_determinant(self):
        a = ((Fraction(2), Fraction(1)), (Fraction(7), Fraction(4)))
        assert det(a) == 1


class TestSubspaceModel:

    def test_normalized_plucker_vector(self):
        plane = SubspaceModel.from_basis([[1, 0, 0, 0], [0, 2, 1, 0]])
        assert plane.plucker[plane.pivot_position] == 1
        assert all(abs(x) <= 1 for x in plane.plucker)
        assert plane.pivot == (0, 1)

    def test_plucker_coordinates_do_not_depend_on_basis(self):
        first = SubspaceModel.from_basis([[1, 0, 1], [0, 1, 1]])
        second = SubspaceModel.from_basis([[1, 1, 2], [1, -1, 0]])
        assert first.plucker == second.plucker

    def test_raw_coordinates(self):
        assert plucker_coordinates([[1, 0, 0], [0, 1, 0]]) == (1, 0, 0)

    def test_invariance_factor(self):
        line = SubspaceModel.from_basis([[1, 0]])
        g = ((Fraction(3), Fraction(1)), (Fraction(0), Fraction(1, 3)))
        assert line.invariance_factor(g) == 3
        assert line.invariance_factor(((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))) is None

    def test_contains(self):
        plane = SubspaceModel.from_basis([[1, 0, 0], [0, 1, 0]])
        assert plane.contains([3, -2, 0])
        assert not plane.contains([0, 0, 1])

    def test_dependent_basis(self):
        with pytest.raises(ValueError):
            SubspaceModel.from_basis([[1, 2], [2, 4]])

    def test_vanishing_pivot(self):
        with pytest.raises(ValueError):
            SubspaceModel.from_basis([[1, 0, 0], [0, 1, 0]], pivot=(1, 2))


if __name__ == "__main__":
    pytest.main([__file__])
