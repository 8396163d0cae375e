import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..errors import DeltaOutOfRange, QuadratureDivergence
from ..measures import MeasureSpec
from .fourier import FourierSpectrum, check_spin_allowed, fourier_coefficient
from .quadrature import haar_quadrature
from .wigner import spin_label

logger = logging.getLogger(__name__)

EIGENVALUE_MAX_DIM = 64
SMOOTHING_THRESHOLD = 0.5


def smoothing_coefficient(delta: float, two_j: int) -> float:
    """Scalar c with P_delta(j) = c * Id for the normalized indicator of the SU(2) ball of radius delta.

    The ball is {t <= delta} for the SU(2) angle t = 2*arccos(a); the Haar
    density of t is proportional to sin^2(t/2) and the character is
    sin((2j+1)t/2) / sin(t/2).
    """
    if two_j == 0:
        return 1.0
    nodes, weights = leggauss(max(64, 2 * two_j + 8))
    t = delta * (nodes + 1) / 2
    w = weights * delta / 2
    numerator = np.sum(w * np.sin((two_j + 1) * t / 2) * np.sin(t / 2))
    denominator = np.sum(w * np.sin(t / 2) ** 2)
    return float(numerator / ((two_j + 1) * denominator))


class HarmonicAnalyzer:
    def __init__(self, settings):
        self.settings = settings

    def _check_delta(self, delta: float):
        if not 0 < delta <= self.settings.smoothing_delta_max:
            raise DeltaOutOfRange(f"delta must lie in (0, {self.settings.smoothing_delta_max}], got {delta}",
                                  details={'delta': delta})

    def smoothing_spectrum(self, delta: float, two_j: int) -> Dict[str, Any]:
        """P_delta(j) and its operator-norm distance to the identity."""
        self._check_delta(delta)
        c = smoothing_coefficient(delta, two_j)
        block = c * np.eye(two_j + 1)
        return {
            'j': spin_label(two_j),
            'delta': delta,
            'block': block,
            'defect': float(np.linalg.norm(block - np.eye(two_j + 1), 2))
        }

    def smoothing_sweep(self, deltas: Sequence[float], two_j_max: int) -> Dict[str, Any]:
        """First spin with ||P_delta(j) - Id|| > 1/2 for each delta, and the fit j_crit ~ c / delta."""
        rows = []
        for delta in deltas:
            self._check_delta(delta)
            critical = None
            for two_j in range(1, two_j_max + 1):
                if 1.0 - smoothing_coefficient(delta, two_j) > SMOOTHING_THRESHOLD:
                    critical = two_j
                    break
            rows.append({'delta': delta, 'critical_j': None if critical is None else critical / 2})

        fitted = [(1.0 / r['delta'], r['critical_j']) for r in rows if r['critical_j'] is not None]
        constant = None
        if fitted:
            x = np.array([f[0] for f in fitted])
            y = np.array([f[1] for f in fitted])
            constant = float(np.dot(x, y) / np.dot(x, x))
        logger.info(f"Smoothing sweep over {len(rows)} scales: c = {constant}")
        return {'records': rows, 'constant': constant, 'fitted_points': len(fitted)}

    def fourier_spectrum(self, measure: MeasureSpec, two_j_max: int) -> FourierSpectrum:
        step = 2 if measure.group == "SO3" else 1
        spins = list(range(0, two_j_max + 1, step))
        with ThreadPoolExecutor(max_workers=self.settings.spectra_threads) as pool:
            blocks = list(pool.map(lambda two_j: fourier_coefficient(measure, two_j), spins))
        return FourierSpectrum(blocks=dict(zip(spins, blocks)))

    def _quadrature_norm(self, spectrum: FourierSpectrum, degree: int) -> float:
        rule = haar_quadrature(degree)
        values = spectrum.evaluate(rule.quaternions)
        return float(np.sum(rule.weights * np.abs(values) ** 2))

    def parseval_check(self, spectrum: FourierSpectrum) -> Dict[str, Any]:
        """Compare the quadrature value of ||f||_2^2 with sum (2j+1) ||F(j)||_HS^2."""
        degree = spectrum.two_j_max
        estimates = [self._quadrature_norm(spectrum, degree + 2 * k)
                     for k in range(self.settings.quadrature_refinements + 1)]
        lhs = estimates[0]
        scale = max(abs(lhs), 1e-300)
        spread = max(abs(e - lhs) for e in estimates) / scale
        if spread > self.settings.parseval_tolerance:
            raise QuadratureDivergence(f"Quadrature estimates of ||f||^2 disagree by {spread:.3e}",
                                       details={'estimates': estimates})
        rhs = spectrum.hilbert_schmidt_mass()
        relative_error = abs(lhs - rhs) / max(abs(rhs), 1e-300)
        logger.info(f"Parseval check up to j = {spin_label(degree)}: lhs = {lhs:.12g}, rhs = {rhs:.12g}")
        return {
            'lhs': lhs,
            'rhs': rhs,
            'relative_error': relative_error,
            'quadrature_degree': degree,
            'holds': relative_error <= self.settings.parseval_tolerance
        }

    def _radius_for_spin(self, measure: MeasureSpec, two_j: int, n: int) -> Dict[str, Any]:
        block = fourier_coefficient(measure, two_j)
        power = np.linalg.matrix_power(block, n)
        gelfand = float(np.linalg.norm(power, 2)) ** (1.0 / n)
        record = {'j': spin_label(two_j), 'two_j': two_j, 'gelfand': gelfand,
                  'operator_norm': float(np.linalg.norm(block, 2))}
        if two_j + 1 <= EIGENVALUE_MAX_DIM:
            record['eigenvalue'] = float(np.max(np.abs(np.linalg.eigvals(block))))
        return record

    def spectral_radius_estimate(self, measure: MeasureSpec, two_j_max: int, n: int) -> Dict[str, Any]:
        """||mu^(j)^n||^(1/n) for 1/2 <= j <= j_max, with the eigenvalue modulus for small blocks."""
        if n < 1:
            raise ValueError(f"n must be at least 1, got {n}")
        measure.validate()
        first = 2 if measure.group == "SO3" else 1
        spins = list(range(first, two_j_max + 1, 2 if measure.group == "SO3" else 1))
        if not spins:
            raise ValueError(f"No nontrivial spin up to j = {spin_label(two_j_max)} for {measure.group}")
        for two_j in spins:
            check_spin_allowed(measure, two_j)

        with ThreadPoolExecutor(max_workers=self.settings.spectra_threads) as pool:
            per_j: List[Dict[str, Any]] = list(pool.map(lambda s: self._radius_for_spin(measure, s, n), spins))

        sup = max(r['gelfand'] for r in per_j)
        eigen = [r['eigenvalue'] for r in per_j if 'eigenvalue' in r]
        logger.info(f"Spectral radius estimate at n = {n}: sup = {sup:.6f}")
        return {
            'per_j': per_j,
            'sup': sup,
            'sup_eigenvalue': max(eigen) if eigen else None,
            'n': n
        }
