import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import sympy

from ..algebra.linalg import (
    ONE, Matrix, Vector, from_sympy, identity, matvec, solve_affine, to_sympy, wedge_index_sets, wedge_power
)
from ..algebra.quadratic import field_of
from ..algebra.subspace import SubspaceModel
from ..errors import BadParameter, EmptyNearSet
from .balls import HeightLedger, WordBall, format_matrix, height_ledger, word_ball
from .plucker import PluckerSystem, plucker_relations, pure_tensor_subspace

logger = logging.getLogger(__name__)

# exact parameter values tried when the Plücker residue leaves free parameters
PARAMETER_GRID = (0, 1, -1, 2, -2)


@dataclass
class AffineMap:
    """v' -> linear v' + constant, on the coordinates v_I with I != pivot and v_pivot = 1."""
    linear: Matrix
    constant: Vector
    pivot_position: int

    def __call__(self, coordinates: Sequence) -> Vector:
        image = matvec(self.linear, coordinates)
        return tuple(x + c for x, c in zip(image, self.constant))


def _embed(coordinates: Sequence, pivot_position: int, one=ONE) -> List:
    full = list(coordinates)
    full.insert(pivot_position, one)
    return full


def stabilizer_system(pivot: Sequence[int], g: Matrix, sign: int = 1) -> AffineMap:
    """P(v) = (wedge^ell g) v - sign * v with v = e_pivot + sum_(I != pivot) v_I e_I."""
    ell = len(pivot)
    w = wedge_power(g, ell)
    index_sets = wedge_index_sets(len(g), ell)
    position = index_sets.index(tuple(pivot))
    shifted = [[w[r][c] - (sign if r == c else 0) for c in range(len(w))] for r in range(len(w))]
    linear = tuple(tuple(row[c] for c in range(len(w)) if c != position) for row in shifted)
    constant = tuple(row[position] for row in shifted)
    return AffineMap(linear=linear, constant=constant, pivot_position=position)


def near_distance(g: Matrix, subspace: SubspaceModel) -> Tuple[float, int]:
    """min over sign of max_I |(wedge g) u' - sign u'|_I, with the sign attaining it."""
    image = matvec(wedge_power(g, subspace.dim), subspace.plucker)
    best = None
    for sign in (1, -1):
        distance = max(abs(float(x - sign * u)) for x, u in zip(image, subspace.plucker))
        if best is None or distance < best[0]:
            best = (distance, sign)
    return best


def solve_stabilizer_system(matrices: Sequence[Matrix], pivot: Sequence[int],
                            signs: Union[int, Sequence[int]] = 1) -> Optional[Tuple[Vector, List[Vector]]]:
    """Common zeros of P_(pivot, g) for all g as (particular solution, nullspace basis)."""
    if isinstance(signs, int):
        signs = [signs] * len(matrices)
    rows, rhs = [], []
    for g, sign in zip(matrices, signs):
        system = stabilizer_system(pivot, g, sign)
        rows.extend(system.linear)
        rhs.extend(-c for c in system.constant)
    if not rows or not rows[0]:
        # ell = d: a single coordinate, fixed to 1
        return ((), []) if all(c == 0 for c in rhs) else None
    return solve_affine(tuple(rows), tuple(rhs))


@dataclass
class Certificate:
    subspace: Optional[SubspaceModel]
    near_set: List[Tuple[Matrix, Tuple[int, ...], int]]
    sign_mode: Optional[str] = None
    solution_dimension: Optional[int] = None
    degenerate: bool = False
    verified: bool = False
    warnings: List[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.subspace is not None and self.verified

    def to_dict(self) -> Dict[str, Any]:
        return {
            'certified': self.certified,
            'subspace': self.subspace.to_dict() if self.subspace is not None else None,
            'sign_mode': self.sign_mode,
            'near_set_size': len(self.near_set),
            'near_words': [{'word': list(word), 'sign': sign} for _, word, sign in self.near_set],
            'solution_dimension': self.solution_dimension,
            'degenerate': self.degenerate,
            'verified': self.verified,
            'warnings': self.warnings
        }


class SubspaceCertifier:
    """Exact certification that the words of a ball which nearly fix L0 share an invariant subspace."""

    def __init__(self, settings):
        self.settings = settings

    def word_ball(self, generators: Sequence[Matrix], radius: int) -> WordBall:
        return word_ball(generators, radius, self.settings.exact_height_bits)

    def height_ledger(self, ball: WordBall, q: Optional[int] = None, ell: int = 1) -> HeightLedger:
        return height_ledger(ball, q, ell)

    def near_set(self, ball: WordBall, subspace: SubspaceModel,
                 threshold: float) -> List[Tuple[Matrix, Tuple[int, ...], int]]:
        """(matrix, word, sign) for the words within threshold of the stabilizer of L0."""
        near = []
        for m, word in ball.elements:
            distance, sign = near_distance(m, subspace)
            if distance <= threshold:
                near.append((m, word, sign))
        return near

    def certify_common_invariant_subspace(self, ball: WordBall, subspace: SubspaceModel,
                                          threshold: float) -> Certificate:
        """Solve {P_(I0, g) = 0 : g near H_L0} with the Plücker relations exactly.

        The plain system (wedge g) v = v is tried first; when it has no pure solution
        each word keeps the sign of its own near distance, (wedge g) v = +-v.
        """
        if threshold <= 0:
            raise BadParameter(f"threshold must be positive, got {threshold}", module="stabcert")
        if subspace.ambient_dim != ball.dimension:
            raise BadParameter(f"Subspace lives in dimension {subspace.ambient_dim}, "
                               f"ball in {ball.dimension}", module="stabcert")
        near = self.near_set(ball, subspace, threshold)
        if not near:
            raise EmptyNearSet(f"No word of the ball lies within {threshold} of the stabilizer",
                               details={'threshold': threshold})
        matrices = [m for m, _, _ in near]
        certificate = Certificate(subspace=None, near_set=near)
        if all(m == identity(ball.dimension) for m in matrices):
            certificate.degenerate = True
            certificate.warnings.append("Near set is {e}; every subspace is invariant")
            logger.warning("Certification is degenerate: only the identity lies near the stabilizer")

        system = plucker_relations(subspace.ambient_dim, subspace.dim)
        attempts = [("plus", [1] * len(near))]
        signed = [sign for _, _, sign in near]
        if any(sign == -1 for sign in signed):
            attempts.append(("signed", signed))
        for mode, signs in attempts:
            solution = solve_stabilizer_system(matrices, subspace.pivot, signs)
            if solution is None:
                logger.debug(f"{mode} system has no solution")
                continue
            particular, kernel = solution
            certificate.solution_dimension = len(kernel)
            found = self._pure_point(particular, kernel, subspace, system)
            if found is None:
                logger.debug(f"{mode} system has no pure tensor on its solution set")
                continue
            basis = pure_tensor_subspace(found, subspace.ambient_dim, subspace.dim)
            candidate = SubspaceModel.from_basis(basis, pivot=subspace.pivot)
            certificate.subspace = candidate
            certificate.sign_mode = mode
            certificate.verified = all(candidate.invariance_factor(m) == s for m, s in zip(matrices, signs))
            if not certificate.verified:
                certificate.warnings.append("Recovered subspace failed independent invariance check")
                logger.error("Recovered subspace failed the independent invariance check")
            if mode == "signed":
                certificate.warnings.append("Only the sign-flipped system g.v + v admits a solution")
            logger.info(f"Certified a common invariant {subspace.dim}-plane for {len(near)} near words "
                        f"({mode} system, solution dimension {len(kernel)})")
            return certificate

        certificate.warnings.append("No common invariant subspace for the near set")
        logger.info(f"No common invariant subspace among {len(near)} near words")
        return certificate

    def _pure_point(self, particular: Vector, kernel: List[Vector], subspace: SubspaceModel,
                    system: PluckerSystem) -> Optional[List]:
        position = subspace.pivot_position
        u0 = [x for k, x in enumerate(subspace.plucker) if k != position]
        if self._in_affine_span(u0, particular, kernel):
            return list(subspace.plucker)
        if not kernel:
            point = _embed(particular, position)
            return point if system.is_pure(point) else None

        d = field_of([x for x in particular] + [x for v in kernel for x in v])
        params = sympy.symbols(f"t0:{len(kernel)}")
        coordinates = [to_sympy(p) + sum(t * to_sympy(v[i]) for t, v in zip(params, kernel))
                       for i, p in enumerate(particular)]
        full = _embed(coordinates, position, sympy.Integer(1))
        equations = [
            sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * full[a] * full[b] for (a, b), c in r.terms))
            for r in system.relations
        ]
        equations = [eq for eq in equations if eq != 0]
        if not equations:
            return _embed(particular, position)
        try:
            solutions = sympy.solve(equations, params, dict=True)
        except NotImplementedError as e:
            logger.warning(f"Plücker residue could not be solved exactly: {e}")
            return None
        for solution in solutions:
            values = [sympy.sympify(c).subs(solution) for c in full]
            free = sorted(set().union(*(v.free_symbols for v in values)), key=str)
            for grid in product(PARAMETER_GRID, repeat=len(free)):
                point = [v.subs(dict(zip(free, grid))) for v in values]
                try:
                    exact = [from_sympy(x, d) for x in point]
                except ValueError:
                    break
                if any(x != 0 for x in exact) and system.is_pure(exact):
                    return exact
        return None

    @staticmethod
    def _in_affine_span(point: Sequence, particular: Vector, kernel: List[Vector]) -> bool:
        difference = [x - p for x, p in zip(point, particular)]
        if not kernel:
            return all(x == 0 for x in difference)
        columns = tuple(tuple(v[i] for v in kernel) for i in range(len(particular)))
        return solve_affine(columns, tuple(difference)) is not None


def describe_ball(ball: WordBall, limit: int = 20) -> Dict[str, Any]:
    result = ball.to_dict()
    result['sample'] = [{'word': list(word), 'matrix': format_matrix(m)} for m, word in ball.elements[:limit]]
    return result
