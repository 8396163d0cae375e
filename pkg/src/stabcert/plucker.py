import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..algebra.linalg import Matrix, Vector, ZERO, nullspace, wedge_index_sets
from ..algebra.quadratic import Scalar
from ..algebra.subspace import wedge_with_vector_matrix

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


def _sorted_sign(indices: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sign of the permutation sorting ``indices``; 0 when an index repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    sign = 1
    items = list(indices)
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


@dataclass(frozen=True)
class QuadraticRelation:
    """sum c_(a,b) p_a p_b over coordinate positions a <= b."""
    terms: Tuple[Tuple[Pair, Fraction], ...]

    def evaluate(self, v: Sequence):
        total = ZERO
        for (a, b), c in self.terms:
            total = total + c * v[a] * v[b]
        return total

    def render(self, index_sets: Sequence[Tuple[int, ...]]) -> str:
        def label(k):
            return "p" + "".join(str(i + 1) for i in index_sets[k])
        parts = []
        for (a, b), c in self.terms:
            sign = "-" if c < 0 else "+"
            magnitude = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(f"{sign} {magnitude}{label(a)}*{label(b)}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


@dataclass
class PluckerSystem:
    """Quadratic relations cutting out the decomposable vectors of the ell-th exterior power of K^d."""
    d: int
    ell: int
    index_sets: List[Tuple[int, ...]]
    relations: List[QuadraticRelation] = field(default_factory=list)

    def residuals(self, v: Sequence) -> List:
        return [r.evaluate(v) for r in self.relations]

    def is_pure(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.residuals(v))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'd': self.d,
            'ell': self.ell,
            'coordinates': len(self.index_sets),
            'relations': [r.render(self.index_sets) for r in self.relations]
        }


def plucker_relations(d: int, ell: int) -> PluckerSystem:
    """The quadratic Plücker relations for ell-dimensional subspaces of K^d.

    For I of size ell-1 and J of size ell+1:
        sum_k (-1)^k p_(I + j_k) p_(J - j_k) = 0
    Relations that vanish identically are dropped and the rest are deduplicated up to scale.
    """
    if not 1 <= ell <= d:
        raise ValueError(f"Need 1 <= ell <= d, got ell={ell}, d={d}")
    index_sets = wedge_index_sets(d, ell)
    position = {I: k for k, I in enumerate(index_sets)}
    relations: List[QuadraticRelation] = []
    seen = set()
    for I in combinations(range(d), ell - 1):
        for J in combinations(range(d), ell + 1):
            terms: Dict[Pair, Fraction] = {}
            for k, j in enumerate(J):
                sign, left = _sorted_sign(I + (j,))
                if sign == 0:
                    continue
                right = J[:k] + J[k + 1:]
                a, b = sorted((position[left], position[right]))
                terms[(a, b)] = terms.get((a, b), ZERO) + (sign if k % 2 == 0 else -sign)
            terms = {pair: c for pair, c in terms.items() if c != 0}
            if not terms:
                continue
            lead = terms[min(terms)]
            normalized = tuple(sorted((pair, Fraction(c) / lead) for pair, c in terms.items()))
            if normalized not in seen:
                seen.add(normalized)
                relations.append(QuadraticRelation(terms=normalized))
    logger.debug(f"Plücker system for Gr({ell}, {d}): {len(relations)} relations")
    return PluckerSystem(d=d, ell=ell, index_sets=index_sets, relations=relations)


def pure_tensor_subspace(u: Sequence[Scalar], d: int, ell: int) -> List[Vector]:
    """Basis of {x in K^d : x ^ u = 0}; it has dimension ell exactly when u is a nonzero pure tensor."""
    if ell == d:
        return nullspace((), d) if any(x != 0 for x in u) else []
    return nullspace(wedge_with_vector_matrix(u, d, ell), d)


def non_pure_witness(d: int, ell: int) -> Optional[Vector]:
    """e_I + e_J for two ell-sets sharing ell-2 indices; None when every vector is pure."""
    if not 2 <= ell <= d - 2:
        return None
    index_sets = wedge_index_sets(d, ell)
    first = tuple(range(ell))
    second = tuple(range(ell - 2)) + (ell, ell + 1)
    return tuple(Fraction(1) if I in (first, second) else ZERO for I in index_sets)
