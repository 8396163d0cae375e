from .quadratic import (
    QuadraticScalar, Scalar, as_scalar, parse_scalar, format_scalar,
    parse_rational, format_rational, is_algebraic_integer, scalar_sign
)
from .linalg import Matrix, Vector, as_matrix, identity, matmul, wedge_power
from .subspace import SubspaceModel, plucker_coordinates

__all__ = [
    'QuadraticScalar', 'Scalar', 'as_scalar', 'parse_scalar', 'format_scalar',
    'parse_rational', 'format_rational', 'is_algebraic_integer', 'scalar_sign',
    'Matrix', 'Vector', 'as_matrix', 'identity', 'matmul', 'wedge_power',
    'SubspaceModel', 'plucker_coordinates'
]
