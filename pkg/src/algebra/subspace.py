import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .linalg import (
    Matrix, Vector, ZERO, det, matvec, rank, wedge_index_sets, wedge_power
)
from .quadratic import Scalar, as_scalar, format_scalar

logger = logging.getLogger(__name__)


def plucker_coordinates(basis: Sequence[Sequence[Scalar]]) -> Vector:
    """ell x ell minors of the basis matrix, indexed by lexicographic ell-subsets."""
    ell = len(basis)
    d = len(basis[0])
    return tuple(
        det(tuple(tuple(vec[i] for i in index_set) for vec in basis))
        for index_set in wedge_index_sets(d, ell)
    )


@dataclass(frozen=True)
class SubspaceModel:
    """An ell-dimensional subspace of K^d with its normalized Plücker vector.

    ``plucker`` is scaled so the coordinate at ``pivot`` equals 1. The pivot is
    the coordinate of largest absolute value, so every other coordinate of the
    normalized vector has absolute value at most 1.
    """
    basis: Tuple[Vector, ...]
    plucker: Vector
    pivot: Tuple[int, ...]
    ambient_dim: int
    index_sets: Tuple[Tuple[int, ...], ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivot_position(self) -> int:
        return self.index_sets.index(self.pivot)

    @classmethod
    def from_basis(cls, basis: Sequence[Sequence], pivot: Optional[Tuple[int, ...]] = None) -> "SubspaceModel":
        vectors = tuple(tuple(as_scalar(x) for x in v) for v in basis)
        if not vectors:
            raise ValueError("A subspace needs at least one basis vector")
        d = len(vectors[0])
        if any(len(v) != d for v in vectors):
            raise ValueError("Basis vectors have different lengths")
        if rank(vectors) != len(vectors):
            raise ValueError("Basis vectors are linearly dependent")

        index_sets = tuple(wedge_index_sets(d, len(vectors)))
        raw = plucker_coordinates(vectors)
        if pivot is None:
            position = max(range(len(raw)), key=lambda k: (abs(float(raw[k])), -k))
        else:
            position = index_sets.index(tuple(pivot))
            if raw[position] == 0:
                raise ValueError(f"Pivot minor {pivot} vanishes")
        scale = raw[position]
        normalized = tuple(x / scale for x in raw)
        return cls(basis=vectors, plucker=normalized, pivot=index_sets[position],
                   ambient_dim=d, index_sets=index_sets)

    def with_pivot(self, pivot: Tuple[int, ...]) -> "SubspaceModel":
        return SubspaceModel.from_basis(self.basis, pivot=pivot)

    def invariance_factor(self, g: Matrix) -> Optional[Scalar]:
        """The scalar c with (wedge g) u = c u, or None when g does not preserve the subspace."""
        image = matvec(wedge_power(g, self.dim), self.plucker)
        c = image[self.pivot_position]
        if all(x == c * u for x, u in zip(image, self.plucker)):
            return c
        return None

    def is_invariant_under(self, g: Matrix) -> bool:
        return self.invariance_factor(g) is not None

    def contains(self, vector: Sequence[Scalar]) -> bool:
        return rank(self.basis + (tuple(as_scalar(x) for x in vector),)) == self.dim

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ambient_dim': self.ambient_dim,
            'dim': self.dim,
            'basis': [[format_scalar(x) for x in v] for v in self.basis],
            'pivot': list(self.pivot),
            'plucker': [format_scalar(x) for x in self.plucker]
        }


def wedge_with_vector_matrix(u: Sequence[Scalar], d: int, ell: int) -> Matrix:
    """Matrix of x -> x ^ u from K^d to the (ell+1)-th exterior power."""
    index_sets = wedge_index_sets(d, ell)
    lookup = {I: k for k, I in enumerate(index_sets)}
    rows: List[Vector] = []
    for J in wedge_index_sets(d, ell + 1):
        row = [ZERO] * d
        for k, j in enumerate(J):
            rest = J[:k] + J[k + 1:]
            coefficient = u[lookup[rest]]
            row[j] = row[j] + (coefficient if k % 2 == 0 else -coefficient)
        rows.append(tuple(row))
    return tuple(rows)
