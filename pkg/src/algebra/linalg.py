import itertools
import logging
from fractions import Fraction
from functools import lru_cache, reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy import QQ
from sympy.combinatorics import Permutation
from sympy.polys.matrices import DomainMatrix

from .quadratic import QuadraticScalar, Scalar, as_scalar, field_of

logger = logging.getLogger(__name__)

Vector = Tuple[Scalar, ...]
Matrix = Tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(as_scalar(x) for x in row) for row in rows)


def as_vector(values: Sequence) -> Vector:
    return tuple(as_scalar(x) for x in values)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(
        tuple(reduce(lambda s, t: s + t, (x * y for x, y in zip(row, col)), ZERO) for col in bt)
        for row in a
    )


def matvec(a: Matrix, v: Sequence[Scalar]) -> Vector:
    return tuple(reduce(lambda s, t: s + t, (x * y for x, y in zip(row, v)), ZERO) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c: Scalar) -> Matrix:
    return tuple(tuple(x * c for x in row) for row in a)


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    return reduce(lambda s, t: s + t, (x * y for x, y in zip(u, v)), ZERO)


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


@lru_cache(maxsize=None)
def _signed_permutations(n: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    return tuple((p, Permutation(list(p)).signature()) for p in itertools.permutations(range(n)))


def det(a: Matrix) -> Scalar:
    """Leibniz determinant; meant for the small minors of wedge powers."""
    n = len(a)
    if n == 0:
        return ONE
    if n > 6:
        return from_domain_scalar(to_domain_matrix(a).det(), field_of(x for row in a for x in row))
    total: Scalar = ZERO
    for perm, sign in _signed_permutations(n):
        term: Scalar = ONE
        for i, j in enumerate(perm):
            term = term * a[i][j]
            if term == 0:
                break
        if term != 0:
            total = total + term if sign > 0 else total - term
    return total


def _domain(d: int):
    return QQ if d == 1 else QQ.algebraic_field(sympy.sqrt(d))


def to_sympy(x: Scalar):
    if isinstance(x, QuadraticScalar):
        return x.to_sympy()
    return sympy.Rational(x.numerator, x.denominator)


def from_sympy(expr, d: int = 1) -> Scalar:
    """Read an exact sympy number of the form a + b*sqrt(d) back into a Scalar."""
    expr = sympy.expand(sympy.nsimplify(expr) if expr.is_Float else expr)
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    if d == 1:
        raise ValueError(f"Expected a rational, got {expr}")
    root = sympy.sqrt(d)
    b = expr.coeff(root)
    a = sympy.expand(expr - b * root)
    if not (a.is_Rational and b.is_Rational):
        raise ValueError(f"{expr} is not in Q(sqrt({d}))")
    return QuadraticScalar.make(Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)), d)


def to_domain_matrix(a: Sequence[Sequence[Scalar]], d: Optional[int] = None) -> DomainMatrix:
    rows = [list(row) for row in a]
    if d is None:
        d = field_of(x for row in rows for x in row)
    K = _domain(d)
    ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[K.from_sympy(to_sympy(x)) for x in row] for row in rows], (len(rows), ncols), K)


def from_domain_scalar(x, d: int) -> Scalar:
    return from_sympy(_domain(d).to_sympy(x), d)


def from_domain_matrix(m: DomainMatrix, d: int) -> Matrix:
    sm = m.to_Matrix()
    return tuple(tuple(from_sympy(sm[i, j], d) for j in range(sm.cols)) for i in range(sm.rows))


def rref(a: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    if not a:
        return a, ()
    d = field_of(x for row in a for x in row)
    reduced, pivots = to_domain_matrix(a, d).rref()
    return from_domain_matrix(reduced, d), tuple(pivots)


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: Optional[int] = None) -> List[Vector]:
    """Basis of {x : a x = 0}, one vector per free column of the reduced form."""
    if not a:
        n = ncols or 0
        return [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    d = field_of(x for row in a for x in row)
    reduced, pivots = rref(a)
    n = len(a[0])
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        vec = [ZERO] * n
        vec[f] = ONE
        for r, p in enumerate(pivots):
            vec[p] = -reduced[r][f]
        basis.append(tuple(vec))
    logger.debug(f"Nullspace over Q(sqrt({d})) has dimension {len(basis)}")
    return basis


def solve_affine(a: Matrix, b: Sequence[Scalar]) -> Optional[Tuple[Vector, List[Vector]]]:
    """Solve a x = b exactly; returns (particular solution, nullspace basis) or None."""
    n = len(a[0])
    augmented = tuple(tuple(row) + (bi,) for row, bi in zip(a, b))
    reduced, pivots = rref(augmented)
    if n in pivots:
        return None
    particular = [ZERO] * n
    for r, p in enumerate(pivots):
        particular[p] = reduced[r][n]
    return tuple(particular), nullspace(a)


def inverse(a: Matrix) -> Matrix:
    d = field_of(x for row in a for x in row)
    return from_domain_matrix(to_domain_matrix(a, d).inv(), d)


def charpoly(a: Matrix) -> List[Scalar]:
    """Coefficients of det(tI - a), leading coefficient first."""
    d = field_of(x for row in a for x in row)
    return [from_domain_scalar(c, d) for c in to_domain_matrix(a, d).charpoly()]


def wedge_index_sets(d: int, ell: int) -> List[Tuple[int, ...]]:
    return list(itertools.combinations(range(d), ell))


def wedge_power(g: Matrix, ell: int) -> Matrix:
    """Matrix of the ell-th exterior power on e_I, I in lexicographic order.

    Entry (I, J) is the minor of g on rows I and columns J.
    """
    index_sets = wedge_index_sets(len(g), ell)
    return tuple(
        tuple(det(tuple(tuple(g[i][j] for j in cols) for i in rows)) for cols in index_sets)
        for rows in index_sets
    )


def infinity_norm(a: Matrix) -> float:
    return max((sum(abs(float(x)) for x in row) for row in a), default=0.0)


def to_numpy(a: Matrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in a], dtype=float)
