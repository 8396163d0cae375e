import pytest
from fractions import Fraction
from math import log, sqrt

import numpy as np

from src.algebra.quadratic import QuadraticScalar
from src.errors import BadHyperplane, BadParameter, NoExpandingPlace, NotPrime, ParseError, SingularProduct
from src.proxdecay import (
    Hyperplane, PadicScalar, ProductAnalyzer, ProductEnsemble, eigenvalue_place, find_expanding_place, padic_abs,
    padic_singular_gap, padic_valuation, parse_ensemble, primitive_class, quadratic_roots
)


class MockSettings:
    """Mock settings for testing"""
    def __init__(self):
        self.default_seed = 12345
        self.proximality_min_slope = 0.01
        self.fit_r2_threshold = 0.9
        self.enumeration_max_n = 12
        self.padic_precision = 8


def F(*values):
    return tuple(Fraction(v) for v in values)


def free_ensemble():
    """Sanov generators and their inverses; the stabilizer of the line through e1 is cyclic"""
    a, a_inv = (F(1, 2), F(0, 1)), (F(1, -2), F(0, 1))
    b, b_inv = (F(1, 0), F(2, 1)), (F(1, 0), F(-2, 1))
    return ProductEnsemble.uniform([a, a_inv, b, b_inv])


def random_rationals(count, seed):
    """Rationals with smooth numerators and denominators, zero included"""
    rng = np.random.default_rng(seed)
    values = [Fraction(0)]
    for _ in range(count - 1):
        num = int(rng.integers(-500, 501))
        den = int(rng.integers(1, 501))
        values.append(Fraction(num, den))
    return values


class TestPadicAbsoluteValue:

    def test_known_values(self):
        assert padic_abs(8, 2) == Fraction(1, 8)
        assert padic_abs(Fraction(3, 4), 2) == 4
        assert padic_abs(Fraction(3, 4), 3) == Fraction(1, 3)
        assert padic_abs(0, 5) == 0
        assert padic_valuation(Fraction(-50, 9), 5) == 2

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_multiplicative_and_ultrametric(self, p):
        xs = random_rationals(1000, seed=p)
        ys = random_rationals(1000, seed=p + 100)
        for x, y in zip(xs, ys):
            assert padic_abs(x * y, p) == padic_abs(x, p) * padic_abs(y, p)
            assert padic_abs(x + y, p) <= max(padic_abs(x, p), padic_abs(y, p))

    def test_not_prime(self):
        for bad in (1, 4, 0, -3):
            with pytest.raises(NotPrime):
                padic_abs(Fraction(1, 2), bad)

    def test_digits_reconstruct_value(self):
        assert PadicScalar(Fraction(-1), 2, precision=5).digits() == [1, 1, 1, 1, 1]
        x = PadicScalar(Fraction(1, 3), 2, precision=20)
        partial = sum(d * 2 ** k for k, d in enumerate(x.digits()))
        assert padic_valuation(x.value - partial, 2) >= 20

    def test_scalar_arithmetic(self):
        x, y = PadicScalar(Fraction(2), 3), PadicScalar(Fraction(9, 2), 3)
        assert abs(x * y) == Fraction(1, 9)
        assert (x + y).value == Fraction(13, 2)
        with pytest.raises(ValueError):
            x + PadicScalar(Fraction(1), 5)


class TestExpandingPlace:

    def test_rationals(self):
        place = find_expanding_place(Fraction(3, 2))
        assert place.kind == "archimedean"
        assert place.abs_value == pytest.approx(1.5)
        place = find_expanding_place(Fraction(2, 3))
        assert place.kind == "padic"
        assert place.prime == 3
        assert place.abs_value == pytest.approx(3.0)

    def test_roots_of_unity(self):
        for x in (Fraction(1), Fraction(-1)):
            with pytest.raises(NoExpandingPlace):
                find_expanding_place(x)

    def test_quadratic(self):
        golden = QuadraticScalar(Fraction(1, 2), Fraction(1, 2), 5)
        assert find_expanding_place(golden).kind == "archimedean"
        # both real embeddings have absolute value below 1
        small = QuadraticScalar(Fraction(1, 4), Fraction(1, 4), 5)
        place = find_expanding_place(small)
        assert place.kind == "padic"
        assert place.prime == 2
        assert place.abs_value == pytest.approx(2.0)

    def test_quadratic_roots(self):
        assert quadratic_roots(Fraction(5, 2), 1) == (2, Fraction(1, 2))
        golden = QuadraticScalar(Fraction(1, 2), Fraction(1, 2), 5)
        assert quadratic_roots(1, -1) == (golden, golden.conjugate())
        assert quadratic_roots(2, 1) == (1, 1)
        with pytest.raises(ValueError):
            quadratic_roots(0, 1)

    def test_eigenvalue_place(self):
        assert eigenvalue_place(Fraction(5, 2), 1).abs_value == pytest.approx(2.0)
        # roots 1 and 1/3: only the second expands
        place = eigenvalue_place(Fraction(4, 3), Fraction(1, 3))
        assert (place.kind, place.prime) == ("padic", 3)
        # complex pairs
        assert eigenvalue_place(1, 2).abs_value == pytest.approx(sqrt(2))
        place = eigenvalue_place(0, Fraction(1, 4))
        assert (place.kind, place.prime) == ("padic", 2)
        assert place.abs_value == pytest.approx(2.0)
        for trace, norm in ((0, 1), (2, 1)):
            with pytest.raises(NoExpandingPlace):
                eigenvalue_place(trace, norm)

    def test_generator_places(self):
        ens = ProductEnsemble.uniform([(F(2, 0), F(0, Fraction(1, 2))), (F(0, -1), F(Fraction(1, 4), 0)),
                                       (F(0, -1), F(1, 0))])
        records = ProductAnalyzer(MockSettings()).expanding_places(ens)
        assert records[0]['place']['kind'] == "archimedean"
        assert records[1]['place'] == {'kind': "padic", 'abs_value': 2.0, 'prime': 2}
        assert records[1]['det_expansion']['valuation'] == -2
        assert records[2]['place'] is None
        assert 'det_expansion' not in records[2]


class TestEnsemble:

    def test_parse(self):
        ens = parse_ensemble({"place": 2, "matrices": [[["1/2", 0], [0, 1]]]})
        assert ens.place == 2
        assert ens.weights == [Fraction(1)]
        assert ens.to_dict()['matrices'][0][0][0] == "1/2"

    def test_bad_entry_pointer(self):
        with pytest.raises(ParseError) as excinfo:
            parse_ensemble({"matrices": [[[1, "x"], [0, 1]]]})
        assert excinfo.value.details['pointer'] == "/matrices/0/0/1"

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ParseError):
            parse_ensemble({"matrices": [[[1, 0], [0, 1]]], "weights": ["1/2"]})

    def test_bad_place(self):
        with pytest.raises(NotPrime):
            parse_ensemble({"place": 4, "matrices": [[[1, 0], [0, 1]]]})

    def test_singular_matrix(self):
        with pytest.raises(SingularProduct):
            ProductEnsemble.uniform([(F(1, 2), F(2, 4))])


class TestProximality:

    def setup_method(self):
        self.analyzer = ProductAnalyzer(MockSettings())

    def test_identity_is_not_proximal(self):
        ens = ProductEnsemble.uniform([(F(1, 0), F(0, 1))])
        result = self.analyzer.proximality_check(ens, 6, 50, seed=1)
        assert result['slope'] == 0.0
        assert not result['proximal']

    def test_rotations_are_not_proximal(self):
        r = (F(Fraction(3, 5), Fraction(-4, 5)), F(Fraction(4, 5), Fraction(3, 5)))
        r_inv = (F(Fraction(3, 5), Fraction(4, 5)), F(Fraction(-4, 5), Fraction(3, 5)))
        result = self.analyzer.proximality_check(ProductEnsemble.uniform([r, r_inv]), 6, 100, seed=2)
        assert not result['proximal']

    def test_stretch_and_rotate_is_proximal(self):
        stretch = (F(2, 0), F(0, 1))
        rotated = (F(Fraction(6, 5), Fraction(-4, 5)), F(Fraction(8, 5), Fraction(3, 5)))
        result = self.analyzer.proximality_check(ProductEnsemble.uniform([stretch, rotated]), 8, 200, seed=3)
        assert result['proximal']
        assert result['slope'] > 0.01
        assert result['gap_ratio'] > 1.0

    def test_two_adic_gap(self):
        ens = ProductEnsemble.uniform([(F(2, 0), F(0, 1))], place=2)
        result = self.analyzer.proximality_check(ens, 6, 5, seed=4)
        assert result['slope'] == pytest.approx(log(2))
        assert result['r_squared'] == pytest.approx(1.0)
        assert result['proximal']

    def test_padic_gap_of_balanced_diagonal(self):
        m = (F(Fraction(1, 8), 0), F(0, 8))
        assert padic_singular_gap(m, 2) == pytest.approx(6 * log(2))


class TestHyperplane:

    def test_from_basis(self):
        plane = Hyperplane.from_basis([F(1, 0)], 2)
        assert plane.normal[0] == 0
        assert plane.normal[1] != 0

    def test_full_span_rejected(self):
        with pytest.raises(BadHyperplane):
            Hyperplane.from_basis([F(1, 0), F(0, 1)], 2)

    def test_dependent_vectors_rejected(self):
        with pytest.raises(BadHyperplane):
            Hyperplane.from_basis([F(1, 0, 0), F(2, 0, 0)], 3)

    def test_zero_normal_rejected(self):
        with pytest.raises(BadHyperplane):
            Hyperplane.from_normal(F(0, 0))

    def test_primitive_class(self):
        assert primitive_class(F(Fraction(-2, 3), Fraction(4, 9))) == (3, -2)
        assert primitive_class(F(0, Fraction(-1, 7))) == (0, 1)


class TestDecay:

    def setup_method(self):
        self.analyzer = ProductAnalyzer(MockSettings())
        self.line = Hyperplane.from_basis([F(1, 0)], 2)

    def test_stabilizing_ensemble_always_hits(self):
        ens = ProductEnsemble.uniform([(F(2, 1), F(0, 1)), (F(1, 3), F(0, Fraction(1, 2)))])
        report = self.analyzer.decay_estimate(ens, F(1, 0), self.line, 0.0, range(0, 6), 200, seed=5)
        assert all(row['hit_probability'] == 1.0 for row in report.rows)
        assert report.kappa_hat == 0.0

    def test_exact_free_group_decay(self):
        report = self.analyzer.exact_hit_probabilities(free_ensemble(), F(1, 0), self.line, 0.0, 8)
        probabilities = [row['hit_probability'] for row in report.rows]
        assert probabilities[:3] == [1, Fraction(1, 2), Fraction(3, 8)]
        assert all(isinstance(p, Fraction) for p in probabilities)
        assert probabilities[8] < probabilities[1]
        assert report.kappa_hat > 0
        assert report.exact

    def test_monte_carlo_agrees_with_enumeration(self):
        samples = 4000
        exact = self.analyzer.exact_hit_probabilities(free_ensemble(), F(1, 0), self.line, 0.0, 12)
        for n in range(13):
            sampled = self.analyzer.decay_estimate(free_ensemble(), F(1, 0), self.line, 0.0, [n], samples,
                                                   seed=600 + n)
            p = float(exact.rows[n]['hit_probability'])
            p_hat = sampled.rows[0]['hit_probability']
            if p * (1 - p) == 0:
                assert p_hat == p
                continue
            sigma = sqrt(p * (1 - p) / samples)
            assert abs(p_hat - p) <= 3 * sigma, f"n = {n}: {p_hat} vs {p}"

    def test_zero_steps_tests_the_start_vector(self):
        off = self.analyzer.decay_estimate(free_ensemble(), F(1, 1), self.line, 0.0, [0], 10, seed=7)
        on = self.analyzer.decay_estimate(free_ensemble(), F(3, 0), self.line, 0.0, [0], 10, seed=7)
        assert off.rows[0]['hit_probability'] == 0.0
        assert on.rows[0]['hit_probability'] == 1.0

    def test_float_path_with_tolerance(self):
        report = self.analyzer.decay_estimate(free_ensemble(), F(1, 0), self.line, 1e-9, [1, 2], 2000, seed=8)
        assert report.rows[0]['hit_probability'] == pytest.approx(0.5, abs=0.05)

    def test_dimension_mismatch(self):
        with pytest.raises(BadHyperplane):
            self.analyzer.decay_estimate(free_ensemble(), F(1, 0, 0), self.line, 0.0, [1], 10)

    def test_enumeration_limit(self):
        with pytest.raises(BadParameter):
            self.analyzer.exact_hit_probabilities(free_ensemble(), F(1, 0), self.line, 0.0, 13)


if __name__ == "__main__":
    pytest.main([__file__])
