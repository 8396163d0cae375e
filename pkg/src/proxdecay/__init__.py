from .padic import (
    PadicScalar, Place, check_prime, eigenvalue_place, find_expanding_place, padic_abs, padic_valuation,
    quadratic_root_valuation, quadratic_roots
)
from .ensemble import ProductEnsemble, load_ensemble, parse_ensemble
from .products import DecayReport, Hyperplane, ProductAnalyzer, padic_singular_gap, primitive_class

__all__ = [
    'PadicScalar', 'Place', 'check_prime', 'eigenvalue_place', 'find_expanding_place', 'padic_abs',
    'padic_valuation', 'quadratic_root_valuation', 'quadratic_roots',
    'ProductEnsemble', 'load_ensemble', 'parse_ensemble',
    'DecayReport', 'Hyperplane', 'ProductAnalyzer', 'padic_singular_gap', 'primitive_class'
]
