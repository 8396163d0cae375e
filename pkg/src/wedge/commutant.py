import logging
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence

import sympy

from ..algebra.linalg import (
    Matrix, Vector, ZERO, to_sympy, as_matrix, charpoly, from_sympy, identity, mat_scale,
    mat_sub, matmul, matvec, nullspace, rank
)
from ..algebra.quadratic import as_scalar, field_of
from ..algebra.subspace import SubspaceModel
from ..errors import InconsistentSizes

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEGREE = 2

_t = sympy.Symbol('t')


def _check_sizes(matrices: Sequence[Matrix]) -> int:
    if not matrices:
        raise InconsistentSizes("Need at least one matrix")
    n = len(matrices[0])
    for m in matrices:
        if len(m) != n or any(len(row) != n for row in m):
            raise InconsistentSizes("Matrices must be square of one common size",
                                    details={'sizes': [[len(m), len(m[0]) if m else 0] for m in matrices]})
    return n


def is_scalar_matrix(x: Matrix) -> bool:
    n = len(x)
    return all(x[i][j] == (x[0][0] if i == j else 0) for i in range(n) for j in range(n))


def commutant_basis(matrices: Sequence[Matrix]) -> List[Matrix]:
    """Basis of {X : XA = AX for every A} as n x n matrices."""
    n = _check_sizes(matrices)
    rows = []
    for a in matrices:
        for i in range(n):
            for j in range(n):
                row = [ZERO] * (n * n)
                for k in range(n):
                    row[i * n + k] += a[k][j]
                    row[k * n + j] -= a[i][k]
                if any(x != 0 for x in row):
                    rows.append(tuple(row))
    vectors = nullspace(tuple(rows), n * n)
    return [tuple(tuple(v[i * n + j] for j in range(n)) for i in range(n)) for v in vectors]


def _squarefree_part(value: Fraction) -> int:
    numerator = value.numerator * value.denominator
    part = 1
    for prime, exponent in sympy.factorint(abs(numerator)).items():
        if exponent % 2:
            part *= prime
    return part


def _factors(x: Matrix, d: int):
    coefficients = charpoly(x)
    n = len(coefficients) - 1
    expr = sum(to_sympy(c) * _t ** (n - k) for k, c in enumerate(coefficients))
    if d > 1:
        _, factors = sympy.factor_list(expr, _t, extension=sympy.sqrt(d))
    else:
        _, factors = sympy.factor_list(expr, _t)
    polys = [sympy.Poly(f, _t) for f, _ in factors]
    return sorted(polys, key=lambda p: (p.degree(), str(p.as_expr())))


def _evaluate(poly: sympy.Poly, x: Matrix, d: int) -> Matrix:
    n = len(x)
    result = tuple(tuple(ZERO for _ in range(n)) for _ in range(n))
    for c in poly.all_coeffs():
        result = matmul(result, x)
        result = tuple(
            tuple(v + (from_sympy(c, d) if i == j else 0) for j, v in enumerate(row))
            for i, row in enumerate(result)
        )
    return result


def _eigenspace(x: Matrix, eigenvalue) -> List:
    return nullspace(mat_sub(x, mat_scale(identity(len(x)), eigenvalue)))


def _proper_subspace(x: Matrix, d: int, max_degree: int) -> Optional[SubspaceModel]:
    factors = _factors(x, d)

    for p in factors:
        if p.degree() == 1:
            a, b = p.all_coeffs()
            kernel = _eigenspace(x, from_sympy(sympy.radsimp(-b / a), d))
            return SubspaceModel.from_basis(kernel)

    if d == 1 and max_degree >= 2:
        for p in factors:
            if p.degree() != 2:
                continue
            a, b, c = (Fraction(int(sympy.numer(v)), int(sympy.denom(v))) for v in p.all_coeffs())
            disc = b * b - 4 * a * c
            if disc <= 0:
                continue
            root_field = _squarefree_part(disc)
            eigenvalue = from_sympy((-to_sympy(b) + sympy.sqrt(to_sympy(disc))) / (2 * to_sympy(a)),
                                    root_field)
            return SubspaceModel.from_basis(_eigenspace(x, eigenvalue))
    return None


def _factor_kernels(x: Matrix, d: int) -> Iterator[List[Vector]]:
    """Proper nonzero kernels of p(x), p running over the irreducible factors of the characteristic polynomial."""
    n = len(x)
    for p in _factors(x, d):
        kernel = nullspace(_evaluate(p, x, d))
        if 0 < len(kernel) < n:
            yield kernel


def invariant_closure(vectors: Sequence[Sequence], matrices: Sequence[Matrix]) -> List[Vector]:
    """Basis of the smallest subspace containing the vectors and invariant under every matrix."""
    basis: List[Vector] = []
    queue = [tuple(as_scalar(x) for x in v) for v in vectors]
    while queue:
        v = queue.pop()
        if rank(tuple(basis + [v])) > len(basis):
            basis.append(v)
            queue.extend(matvec(m, v) for m in matrices)
    return basis


def _closure_search(candidates: Sequence[Matrix], matrices: Sequence[Matrix], d: int) -> Optional[SubspaceModel]:
    """Invariant closures of the kernels p(x) for commutant elements and input matrices.

    A commutant element whose eigenvalues are all non-real still splits the space when one of
    its factors has a proper kernel. When every commutant element is a complex structure the
    kernels of the input matrices are closed up under the whole set instead.
    """
    n = len(matrices[0])
    for x in list(candidates) + list(matrices):
        for kernel in _factor_kernels(x, d):
            closure = invariant_closure(kernel, matrices)
            if len(closure) < n:
                return SubspaceModel.from_basis(closure)
            for v in kernel:
                closure = invariant_closure([v], matrices)
                if len(closure) < n:
                    return SubspaceModel.from_basis(closure)
    return None


def commutant_invariant_subspace(matrices: Sequence[Sequence[Sequence]],
                                 max_degree: int = DEFAULT_MAX_DEGREE) -> Optional[SubspaceModel]:
    """A proper nonzero subspace invariant under every matrix, read off the commutant.

    Returns None when the commutant is scalars only. Otherwise a non-scalar
    commuting X is taken and the kernel of X - lambda I is returned; it is
    invariant because X commutes with every input matrix. Without a real
    eigenvalue of degree <= max_degree the kernels of irreducible factors are
    tried, closed up under the input matrices.
    """
    matrices = [as_matrix(m) for m in matrices]
    n = _check_sizes(matrices)
    d = field_of(x for m in matrices for row in m for x in row)

    basis = commutant_basis(matrices)
    logger.debug(f"Commutant of {len(matrices)} matrices of size {n} has dimension {len(basis)}")
    if len(basis) <= 1:
        return None

    candidates = [x for x in basis if not is_scalar_matrix(x)]
    generic = basis[0]
    for k, x in enumerate(basis[1:], start=2):
        generic = tuple(tuple(g + k * v for g, v in zip(grow, xrow)) for grow, xrow in zip(generic, x))
    if not is_scalar_matrix(generic):
        candidates.append(generic)

    for x in candidates:
        subspace = _proper_subspace(x, d, max_degree)
        if subspace is not None:
            logger.info(f"Found invariant subspace of dimension {subspace.dim} in dimension {n}")
            return subspace

    subspace = _closure_search(candidates, matrices, d)
    if subspace is not None:
        logger.info(f"Found invariant subspace of dimension {subspace.dim} in dimension {n} "
                    f"from a factor kernel")
        return subspace

    logger.warning(f"Commutant has dimension {len(basis)} but neither an eigenvalue of degree <= {max_degree} "
                   f"nor a factor kernel gives a real invariant subspace")
    return None
