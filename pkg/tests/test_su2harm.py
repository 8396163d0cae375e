import pytest
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from src.errors import DeltaOutOfRange, NotProbability
from src.measures import GroupElement, MeasureSpec, multiply_quaternion_arrays
from src.su2harm import (
    POLYNOMIAL_MAX_TWO_J, FourierSpectrum, HarmonicAnalyzer, angular_momentum, character, convolution_power,
    convolve, euler_angles, euler_to_quaternion, fourier_coefficient, haar_measure, haar_quadrature,
    polynomial_wigner_matrices, spectral_bound_from_l2, su2_matrix, symmetrize, two_j_of, wigner_from_euler,
    wigner_matrices, wigner_matrix, wigner_matrix_polynomial
)


class MockSettings:
    """Mock settings for testing"""
    def __init__(self):
        self.spectra_threads = 1
        self.smoothing_delta_max = 1.0
        self.parseval_tolerance = 1e-8
        self.quadrature_refinements = 2


def random_quaternions(count, seed=0):
    """Random unit quaternions"""
    rng = np.random.default_rng(seed)
    q = rng.standard_normal((count, 4))
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def float_measure(quaternions, seed=0):
    """SU(2) measure with random positive float weights on the given quaternions"""
    rng = np.random.default_rng(seed)
    weights = rng.random(len(quaternions)) + 0.1
    weights = list(weights / weights.sum())
    atoms = [GroupElement(group="SU2", quaternion=tuple(float(x) for x in q)) for q in quaternions]
    return MeasureSpec(group="SU2", atoms=atoms, weights=weights)


def pythagorean_generators():
    """Rotations with cos(t/2) = 3/5 about the x and y axes"""
    return [
        GroupElement.from_quaternion([Fraction(3, 5), Fraction(4, 5), 0, 0]),
        GroupElement.from_quaternion([Fraction(3, 5), 0, Fraction(4, 5), 0]),
    ]


class TestWignerMatrices:

    def test_spin_zero_is_trivial(self):
        for q in random_quaternions(5):
            assert np.allclose(wigner_matrix(q, 0), [[1.0]])

    def test_identity_maps_to_identity(self):
        for two_j in range(8):
            assert np.allclose(wigner_matrix([1, 0, 0, 0], two_j), np.eye(two_j + 1), atol=1e-12)

    def test_spin_half_is_the_su2_matrix(self):
        for q in random_quaternions(10, seed=1):
            assert np.allclose(wigner_matrix(q, 1), su2_matrix(q), atol=1e-12)

    def test_homomorphism(self):
        p = random_quaternions(20, seed=2)
        q = random_quaternions(20, seed=3)
        pq = multiply_quaternion_arrays(p, q)
        lhs = wigner_matrices(pq, 6)
        rhs = wigner_matrices(p, 6) @ wigner_matrices(q, 6)
        assert np.max(np.abs(lhs - rhs)) <= 1e-10

    def test_unitary(self):
        D = wigner_matrices(random_quaternions(20, seed=4), 9)
        products = D @ np.conj(np.transpose(D, (0, 2, 1)))
        assert np.max(np.abs(products - np.eye(10))) <= 1e-10

    @pytest.mark.parametrize("two_j", [1, 2, 3, 4, 6, POLYNOMIAL_MAX_TWO_J])
    def test_polynomial_formula_agrees_with_euler_angles(self, two_j):
        q = random_quaternions(5, seed=5)
        assert np.allclose(polynomial_wigner_matrices(q, two_j), wigner_from_euler(*euler_angles(q), two_j),
                           atol=1e-10)
        assert np.allclose(wigner_matrix(q[0], two_j), wigner_matrix_polynomial(q[0], two_j), atol=1e-12)

    def test_polynomial_formula_at_poles(self):
        # beta = 0 and beta = pi
        poles = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [-1, 0, 0, 0]], dtype=float)
        D = wigner_matrices(poles, 4)
        assert np.allclose(D, wigner_from_euler(*euler_angles(poles), 4), atol=1e-12)
        assert np.allclose(D[0], np.eye(5))
        assert np.allclose(D[4], np.eye(5))

    def test_large_spins_stay_unitary(self):
        two_j = POLYNOMIAL_MAX_TWO_J + 10
        p = random_quaternions(10, seed=11)
        q = random_quaternions(10, seed=12)
        D = wigner_matrices(p, two_j)
        products = D @ np.conj(np.transpose(D, (0, 2, 1)))
        assert np.max(np.abs(products - np.eye(two_j + 1))) <= 1e-10
        lhs = wigner_matrices(multiply_quaternion_arrays(p, q), two_j)
        assert np.max(np.abs(lhs - D @ wigner_matrices(q, two_j))) <= 1e-9

    def test_exponential_of_generator(self):
        jx, jy, jz = angular_momentum(5)
        for q in random_quaternions(5, seed=6):
            v = q[1:]
            theta = 2 * np.arctan2(np.linalg.norm(v), q[0])
            n = v / np.linalg.norm(v)
            expected = expm(-1j * theta * (n[0] * jx + n[1] * jy + n[2] * jz))
            assert np.allclose(wigner_matrix(q, 5), expected, atol=1e-10)

    def test_euler_round_trip(self):
        q = random_quaternions(50, seed=7)
        assert np.allclose(euler_to_quaternion(*euler_angles(q)), q, atol=1e-12)

    def test_euler_angles_at_poles(self):
        for q in ([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [-1, 0, 0, 0]):
            assert np.allclose(euler_to_quaternion(*euler_angles(np.array(q, dtype=float))), [q], atol=1e-12)

    def test_character_is_trace(self):
        q = np.vstack([random_quaternions(10, seed=8), [[1, 0, 0, 0], [-1, 0, 0, 0]]])
        for two_j in range(5):
            traces = np.trace(wigner_matrices(q, two_j), axis1=1, axis2=2)
            assert np.allclose(character(q, two_j), traces.real, atol=1e-9)

    def test_two_j_parsing(self):
        assert two_j_of(Fraction(1, 2)) == 1
        assert two_j_of(0.5) == 1
        assert two_j_of("3/2") == 3
        assert two_j_of(20) == 40
        with pytest.raises(ValueError):
            two_j_of(Fraction(1, 3))


class TestFourierCoefficients:

    def test_dirac_gives_identity(self):
        mu = MeasureSpec.dirac()
        for two_j in range(5):
            assert np.allclose(fourier_coefficient(mu, two_j), np.eye(two_j + 1))

    def test_haar_quadrature_annihilates_nontrivial_spins(self):
        mu = haar_measure(4)
        for two_j in range(1, 5):
            assert np.linalg.norm(fourier_coefficient(mu, two_j), 2) <= 1e-6
        assert np.allclose(fourier_coefficient(mu, 0), [[1.0]])

    def test_quadrature_weights_sum_to_one(self):
        rule = haar_quadrature(6)
        assert rule.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert rule.size == np.prod(rule.shape)

    def test_operator_norm_at_most_one(self):
        mu = float_measure(random_quaternions(6, seed=9))
        for two_j in range(8):
            assert np.linalg.norm(fourier_coefficient(mu, two_j), 2) <= 1 + 1e-12

    def test_symmetric_measure_is_self_adjoint(self):
        mu = MeasureSpec.symmetric_uniform(pythagorean_generators())
        for two_j in range(1, 6):
            F = fourier_coefficient(mu, two_j)
            assert np.allclose(F, F.conj().T, atol=1e-12)
            assert np.allclose(np.linalg.eigvals(F).imag, 0, atol=1e-10)

    def test_convolution_multiplies_coefficients(self):
        mu = float_measure(random_quaternions(3, seed=10), seed=11)
        nu = float_measure(random_quaternions(4, seed=12), seed=13)
        both = convolve(mu, nu)
        for two_j in range(6):
            lhs = fourier_coefficient(both, two_j)
            rhs = fourier_coefficient(mu, two_j) @ fourier_coefficient(nu, two_j)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10

    def test_exact_convolution_keeps_exact_weights(self):
        mu = MeasureSpec.symmetric_uniform(pythagorean_generators())
        two_step = convolution_power(mu, 2)
        assert two_step.exact
        assert sum(two_step.weights) == 1
        # the four products g g^-1 collapse onto the identity
        identity = GroupElement.identity().key()
        mass = {a.key(): w for a, w in zip(two_step.atoms, two_step.weights)}
        assert mass[identity] == Fraction(1, 4)

    def test_symmetrize_is_self_adjoint(self):
        mu = float_measure(random_quaternions(3, seed=14))
        F = fourier_coefficient(symmetrize(mu), 2)
        assert np.allclose(F, F.conj().T, atol=1e-12)

    def test_invalid_measure(self):
        atoms = [GroupElement.identity(), GroupElement.identity()]
        mu = MeasureSpec(group="SU2", atoms=atoms, weights=[Fraction(1, 2), Fraction(1, 3)])
        with pytest.raises(NotProbability):
            fourier_coefficient(mu, 1)

    def test_so3_measure_rejects_half_integer_spin(self):
        with pytest.raises(ValueError):
            fourier_coefficient(MeasureSpec.dirac("SO3"), 1)


class TestParseval:

    def setup_method(self):
        self.analyzer = HarmonicAnalyzer(MockSettings())

    def test_constant_function(self):
        result = self.analyzer.parseval_check(FourierSpectrum(blocks={0: np.array([[1.0]])}))
        assert result['lhs'] == pytest.approx(1.0, abs=1e-12)
        assert result['rhs'] == pytest.approx(1.0, abs=1e-12)

    def test_spin_half_character(self):
        result = self.analyzer.parseval_check(FourierSpectrum(blocks={1: np.eye(2) / 2}))
        assert result['lhs'] == pytest.approx(1.0, rel=1e-10)
        assert result['holds']

    def test_random_band_limited_spectrum(self):
        spectrum = FourierSpectrum.random(10, np.random.default_rng(15))
        result = self.analyzer.parseval_check(spectrum)
        assert result['relative_error'] <= 1e-8


class TestSmoothing:

    def setup_method(self):
        self.analyzer = HarmonicAnalyzer(MockSettings())

    def test_spin_zero_is_exactly_one(self):
        result = self.analyzer.smoothing_spectrum(0.3, 0)
        assert result['block'].tolist() == [[1.0]]
        assert result['defect'] == 0.0

    def test_defect_vanishes_as_delta_shrinks(self):
        defects = [self.analyzer.smoothing_spectrum(delta, 6)['defect'] for delta in (0.8, 0.4, 0.1, 0.01)]
        assert defects == sorted(defects, reverse=True)
        assert defects[-1] < 1e-3

    def test_delta_out_of_range(self):
        with pytest.raises(DeltaOutOfRange):
            self.analyzer.smoothing_spectrum(0.0, 2)
        with pytest.raises(DeltaOutOfRange):
            self.analyzer.smoothing_spectrum(2.5, 2)

    def test_sweep_critical_spin_scales_like_inverse_delta(self):
        result = self.analyzer.smoothing_sweep([0.8, 0.4, 0.2, 0.1], 200)
        criticals = [r['critical_j'] for r in result['records']]
        assert all(c is not None for c in criticals)
        assert criticals == sorted(criticals)
        assert result['constant'] > 0
        for r in result['records']:
            assert r['critical_j'] * r['delta'] == pytest.approx(result['constant'], rel=0.5)


class TestSpectralRadius:

    def setup_method(self):
        self.analyzer = HarmonicAnalyzer(MockSettings())

    def test_dirac_has_no_gap(self):
        result = self.analyzer.spectral_radius_estimate(MeasureSpec.dirac(), 4, 8)
        assert all(r['gelfand'] == pytest.approx(1.0) for r in result['per_j'])

    def test_single_rotation_has_no_gap(self):
        mu = MeasureSpec.symmetric_uniform(pythagorean_generators()[:1])
        for n in (1, 8, 32):
            assert self.analyzer.spectral_radius_estimate(mu, 4, n)['sup'] == pytest.approx(1.0, abs=1e-9)

    def test_generic_pair_has_gap(self):
        mu = MeasureSpec.symmetric_uniform(pythagorean_generators())
        result = self.analyzer.spectral_radius_estimate(mu, 6, 32)
        assert result['sup'] < 1
        for r in result['per_j']:
            assert r['eigenvalue'] <= r['gelfand'] + 1e-9

    def test_gelfand_estimate_decreases_along_doublings(self):
        mu = float_measure(random_quaternions(3, seed=16), seed=17)
        sups = [self.analyzer.spectral_radius_estimate(mu, 4, n)['sup'] for n in (1, 2, 4, 8, 16)]
        for earlier, later in zip(sups, sups[1:]):
            assert later <= earlier + 1e-6

    def test_l2_bound(self):
        bound = spectral_bound_from_l2(0.5, 0.2, 3, 4)
        assert bound['operator_norm_bound'] == pytest.approx(0.5)
        assert bound['spectral_radius_bound'] == pytest.approx(0.5 ** 0.25)
        assert bound['valid']
        assert not spectral_bound_from_l2(0.5, 0.7, 3, 4)['valid']


if __name__ == "__main__":
    pytest.main([__file__])
