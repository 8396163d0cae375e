import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from ..errors import DimensionMismatch, NotHighestWeight
from ..rootsys import Weight, weyl_dimension
from ..rootsys.types import RationalVector, vec_add
from .chevalley import ChevalleyAlgebra, Element

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def normalize_monomial(indices: Iterable[int]) -> Tuple[int, Optional[Monomial]]:
    """Sort a wedge of basis indices; returns (sign, sorted) or (0, None) on a repeat."""
    items = list(indices)
    if len(set(items)) != len(items):
        return 0, None
    inversions = sum(1 for a in range(len(items)) for b in range(a + 1, len(items)) if items[a] > items[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(items))


@dataclass
class WedgeVector:
    """Sparse element of the ell-th exterior power of the Lie algebra.

    Keys are strictly increasing tuples of basis indices.
    """
    degree: int
    coords: Dict[Monomial, Fraction] = field(default_factory=dict)

    @classmethod
    def monomial(cls, indices: Iterable[int], coefficient=1) -> "WedgeVector":
        items = tuple(indices)
        sign, key = normalize_monomial(items)
        vector = cls(degree=len(items))
        if sign:
            vector.coords[key] = Fraction(coefficient) * sign
        return vector

    def is_zero(self) -> bool:
        return not self.coords

    def copy(self) -> "WedgeVector":
        return WedgeVector(self.degree, dict(self.coords))

    def __add__(self, other: "WedgeVector") -> "WedgeVector":
        if other.degree != self.degree:
            raise ValueError(f"Cannot add wedge degrees {self.degree} and {other.degree}")
        result = dict(self.coords)
        for key, value in other.coords.items():
            total = result.get(key, Fraction(0)) + value
            if total:
                result[key] = total
            else:
                result.pop(key, None)
        return WedgeVector(self.degree, result)

    def __sub__(self, other: "WedgeVector") -> "WedgeVector":
        return self + other.scale(-1)

    def scale(self, c) -> "WedgeVector":
        c = Fraction(c)
        if c == 0:
            return WedgeVector(self.degree)
        return WedgeVector(self.degree, {k: v * c for k, v in self.coords.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, WedgeVector) and self.degree == other.degree and self.coords == other.coords

    def leading_key(self) -> Monomial:
        return max(self.coords)

    def to_dict(self, alg: Optional[ChevalleyAlgebra] = None) -> Dict[str, str]:
        def name(key):
            if alg is None:
                return "^".join(str(i) for i in key)
            return "^".join(alg.label(i) for i in key)
        return {name(key): str(value) for key, value in sorted(self.coords.items())}


def act(alg: ChevalleyAlgebra, x: Element, xi: WedgeVector) -> WedgeVector:
    """Derivation action x . (v1 ^ ... ^ vl) = sum_t v1 ^ ... ^ [x, vt] ^ ... ^ vl."""
    result: Dict[Monomial, Fraction] = {}
    for key, coefficient in xi.coords.items():
        for t, index in enumerate(key):
            image = alg.bracket(x, {index: Fraction(1)})
            for target, c in image.items():
                sign, sorted_key = normalize_monomial(key[:t] + (target,) + key[t + 1:])
                if sign:
                    result[sorted_key] = result.get(sorted_key, Fraction(0)) + sign * c * coefficient
    return WedgeVector(xi.degree, {k: v for k, v in result.items() if v != 0})


def act_basis(alg: ChevalleyAlgebra, index: int, xi: WedgeVector) -> WedgeVector:
    return act(alg, {index: Fraction(1)}, xi)


def monomial_weight(alg: ChevalleyAlgebra, key: Monomial) -> RationalVector:
    total = tuple(Fraction(0) for _ in range(alg.rs.ambient_dim))
    for index in key:
        total = vec_add(total, alg.basis_weight(index))
    return total


def xi_vector(alg: ChevalleyAlgebra, extremal_roots: Iterable[int]) -> WedgeVector:
    """Wedge of the root vectors E_alpha over a set of root indices, in increasing basis order."""
    indices = sorted(alg.rank + k for k in extremal_roots)
    return WedgeVector.monomial(indices)


def check_highest_weight(alg: ChevalleyAlgebra, xi: WedgeVector) -> Weight:
    """Weight of xi, after checking it is a weight vector killed by every simple raising operator."""
    if xi.is_zero():
        raise NotHighestWeight("The zero vector has no weight")
    weights = {monomial_weight(alg, key) for key in xi.coords}
    if len(weights) != 1:
        raise NotHighestWeight("Vector is not a torus weight vector",
                               details={'weights': len(weights)})
    for i in range(alg.rank):
        if not act_basis(alg, alg.simple_raising(i), xi).is_zero():
            raise NotHighestWeight(f"Simple raising operator {i + 1} does not kill the vector",
                                   details={'simple_root': i + 1})
    return alg.rs.weight(weights.pop())


class EchelonBasis:
    """Sparse row echelon form: each stored vector has its own leading monomial with coefficient 1."""

    def __init__(self):
        self.pivots: Dict[Monomial, WedgeVector] = {}
        self.order: List[WedgeVector] = []

    def reduce(self, vector: WedgeVector) -> WedgeVector:
        while True:
            hits = [key for key in vector.coords if key in self.pivots]
            if not hits:
                return vector
            key = max(hits)
            vector = vector - self.pivots[key].scale(vector.coords[key])

    def add(self, vector: WedgeVector) -> Optional[WedgeVector]:
        """Insert the reduction of vector; returns it when it enlarges the span."""
        reduced = self.reduce(vector)
        if reduced.is_zero():
            return None
        key = reduced.leading_key()
        reduced = reduced.scale(1 / reduced.coords[key])
        self.pivots[key] = reduced
        self.order.append(reduced)
        return reduced

    def __len__(self) -> int:
        return len(self.order)


@dataclass
class SubRepresentation:
    degree: int
    highest_weight: Weight
    basis: List[WedgeVector]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_dict(self, alg: Optional[ChevalleyAlgebra] = None, include_basis: bool = False):
        data = {
            'degree': self.degree,
            'dimension': self.dim,
            'highest_weight': [str(c) for c in self.highest_weight.fw_coords]
        }
        if include_basis:
            data['basis'] = [v.to_dict(alg) for v in self.basis]
        return data


def generate_subrep(alg: ChevalleyAlgebra, xi: WedgeVector) -> SubRepresentation:
    """Span of all lowering-operator images of a highest weight vector.

    The dimension is checked against the Weyl dimension formula for the
    highest weight.
    """
    weight = check_highest_weight(alg, xi)
    expected = weyl_dimension(alg.rs, weight)

    echelon = EchelonBasis()
    queue = [echelon.add(xi)]
    lowering = [alg.simple_lowering(i) for i in range(alg.rank)]
    while queue:
        vector = queue.pop(0)
        for index in lowering:
            image = act_basis(alg, index, vector)
            if image.is_zero():
                continue
            added = echelon.add(image)
            if added is not None:
                queue.append(added)
        if len(echelon) > expected:
            break

    if len(echelon) != expected:
        raise DimensionMismatch(
            f"Generated {len(echelon)} vectors, Weyl dimension formula gives {expected}",
            details={'generated': len(echelon), 'expected': expected}
        )
    logger.info(f"{alg.rs.name}: degree {xi.degree} subrepresentation of dimension {expected}")
    return SubRepresentation(degree=xi.degree, highest_weight=weight, basis=echelon.order)
