from .wigner import (
    angular_momentum, character, euler_angles, spin_label, su2_matrix, two_j_of,
    POLYNOMIAL_MAX_TWO_J, polynomial_wigner_matrices, wigner_from_euler, wigner_matrices, wigner_matrix,
    wigner_matrix_polynomial
)
from .quadrature import HaarQuadrature, euler_to_quaternion, haar_measure, haar_quadrature
from .fourier import (
    FourierSpectrum, convolution_power, convolve, fourier_coefficient,
    reflect, spectral_bound_from_l2, symmetrize
)
from .analyzer import HarmonicAnalyzer, smoothing_coefficient

__all__ = [
    'angular_momentum', 'character', 'euler_angles', 'spin_label', 'su2_matrix', 'two_j_of',
    'POLYNOMIAL_MAX_TWO_J', 'polynomial_wigner_matrices', 'wigner_from_euler',
    'wigner_matrices', 'wigner_matrix', 'wigner_matrix_polynomial',
    'HaarQuadrature', 'euler_to_quaternion', 'haar_measure', 'haar_quadrature',
    'FourierSpectrum', 'convolution_power', 'convolve', 'fourier_coefficient',
    'reflect', 'spectral_bound_from_l2', 'symmetrize',
    'HarmonicAnalyzer', 'smoothing_coefficient'
]
