import json
import logging
from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Tuple

from ..algebra.linalg import as_matrix, inverse
from ..algebra.quadratic import format_rational
from ..errors import ClassificationFailure
from .types import (
    RationalVector, RootSystem, RootSystemSpec, vec_add, vec_neg, vec_scale
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

CLASSICAL_ROOT_COUNTS = {
    "E6": 72,
    "E7": 126,
    "E8": 240,
    "F4": 48,
    "G2": 12,
}


def expected_root_count(spec: RootSystemSpec) -> int:
    ell = spec.rank
    if spec.family == "A":
        return ell * (ell + 1)
    if spec.family in ("B", "C"):
        return 2 * ell * ell
    if spec.family == "D":
        return 2 * ell * (ell - 1)
    return CLASSICAL_ROOT_COUNTS[spec.name]


def _unit(n: int, i: int, scale=1) -> List[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(scale)
    return v


def _difference(n: int, i: int, j: int) -> RationalVector:
    v = _unit(n, i)
    v[j] -= 1
    return tuple(v)


def _e8_simple_roots() -> List[RationalVector]:
    # Bourbaki labelling: alpha_1 = (e1 + e8 - e2 - ... - e7)/2, alpha_2 = e1 + e2,
    # alpha_k = e_{k-1} - e_{k-2} for k >= 3
    first = tuple([HALF] + [-HALF] * 6 + [HALF])
    second = tuple(_unit(8, 0)[i] + _unit(8, 1)[i] for i in range(8))
    rest = [_difference(8, k - 2, k - 3) for k in range(3, 9)]
    return [first, second] + rest


def simple_roots_for(spec: RootSystemSpec) -> Tuple[int, List[RationalVector]]:
    """Standard ambient realization: (ambient dimension, simple roots)."""
    ell = spec.rank
    family = spec.family

    if family == "A":
        n = ell + 1
        return n, [_difference(n, i, i + 1) for i in range(ell)]
    if family == "B":
        roots = [_difference(ell, i, i + 1) for i in range(ell - 1)]
        return ell, roots + [tuple(_unit(ell, ell - 1))]
    if family == "C":
        roots = [_difference(ell, i, i + 1) for i in range(ell - 1)]
        return ell, roots + [tuple(_unit(ell, ell - 1, 2))]
    if family == "D":
        roots = [_difference(ell, i, i + 1) for i in range(ell - 1)]
        last = _unit(ell, ell - 2)
        last[ell - 1] = Fraction(1)
        return ell, roots + [tuple(last)]
    if family == "E":
        return 8, _e8_simple_roots()[:ell]
    if family == "F":
        return 4, [
            _difference(4, 1, 2),
            _difference(4, 2, 3),
            tuple(_unit(4, 3)),
            (HALF, -HALF, -HALF, -HALF),
        ]
    if family == "G":
        return 3, [
            _difference(3, 0, 1),
            (Fraction(-2), Fraction(1), Fraction(1)),
        ]
    raise ClassificationFailure(f"No realization for {spec.name}")


def _dot(u: RationalVector, v: RationalVector) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def _reflect(v: RationalVector, alpha: RationalVector) -> RationalVector:
    c = 2 * _dot(v, alpha) / _dot(alpha, alpha)
    return tuple(x - c * a for x, a in zip(v, alpha))


def close_under_reflections(simple: List[RationalVector]) -> List[RationalVector]:
    """Orbit of the simple roots under the simple reflections (breadth first)."""
    seen = set(simple)
    queue = deque(simple)
    while queue:
        root = queue.popleft()
        for alpha in simple:
            image = _reflect(root, alpha)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    return list(seen)


@lru_cache(maxsize=32)
def build_root_system(spec: RootSystemSpec) -> RootSystem:
    """Build the exact root system of an admissible (family, rank)."""
    ambient_dim, simple = simple_roots_for(spec)
    ell = len(simple)

    roots = close_under_reflections(simple)

    gram = as_matrix([[_dot(a, b) for b in simple] for a in simple])
    gram_inv = inverse(gram)

    def simple_coordinates(v: RationalVector) -> Tuple[Fraction, ...]:
        pairings = [_dot(v, a) for a in simple]
        return tuple(sum((gram_inv[i][j] * pairings[j] for j in range(ell)), Fraction(0))
                     for i in range(ell))

    coords = {root: simple_coordinates(root) for root in roots}
    for root, c in coords.items():
        if any(x.denominator != 1 for x in c) or not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
            raise ClassificationFailure(f"Root {root} of {spec.name} has mixed simple coordinates {c}")

    positives = sorted((r for r in roots if sum(coords[r]) > 0),
                       key=lambda r: (sum(coords[r]), tuple(coords[r])))
    ordered = positives + [vec_neg(r) for r in positives]
    if len(ordered) != len(roots):
        raise ClassificationFailure(f"{spec.name}: roots are not closed under negation")
    if len(ordered) != expected_root_count(spec):
        raise ClassificationFailure(
            f"{spec.name}: found {len(ordered)} roots, expected {expected_root_count(spec)}")

    longest = max(_dot(a, a) for a in simple)
    form_scale = Fraction(2) / longest

    cartan = tuple(
        tuple(int(2 * _dot(simple[i], simple[j]) / _dot(simple[j], simple[j])) for j in range(ell))
        for i in range(ell)
    )
    cartan_inv = inverse(as_matrix(cartan))
    weights = []
    for i in range(ell):
        omega = tuple(Fraction(0) for _ in range(ambient_dim))
        for k in range(ell):
            omega = vec_add(omega, vec_scale(cartan_inv[i][k], simple[k]))
        weights.append(omega)

    rho = tuple(Fraction(0) for _ in range(ambient_dim))
    for omega in weights:
        rho = vec_add(rho, omega)

    highest = positives[-1]

    rs = RootSystem(
        spec=spec,
        ambient_dim=ambient_dim,
        form_scale=form_scale,
        simple_roots=tuple(simple),
        all_roots=tuple(ordered),
        simple_coords=tuple(coords[r] for r in ordered),
        fundamental_weights=tuple(weights),
        cartan_matrix=cartan,
        highest_root=highest,
        rho=rho,
        root_index={r: k for k, r in enumerate(ordered)},
    )
    logger.info(f"Built root system {spec.name}: {len(ordered)} roots in dimension {ambient_dim}")
    return rs


def root_system(family: str, rank: int) -> RootSystem:
    return build_root_system(RootSystemSpec(family, rank))


def to_json(rs: RootSystem) -> Dict[str, Any]:
    """Export schema: exact entries as [num, den] pairs."""
    def pairs(v: RationalVector) -> List[List[int]]:
        return [[x.numerator, x.denominator] for x in v]

    return {
        'family': rs.spec.family,
        'rank': rs.rank,
        'ambient_dim': rs.ambient_dim,
        'form_scale': format_rational(rs.form_scale),
        'simple_roots': [pairs(a) for a in rs.simple_roots],
        'roots': [pairs(r) for r in rs.all_roots],
        'weights': [pairs(w) for w in rs.fundamental_weights],
        'cartan_matrix': [list(row) for row in rs.cartan_matrix],
        'highest_root': pairs(rs.highest_root),
        'rho': pairs(rs.rho),
    }


def to_json_string(rs: RootSystem) -> str:
    return json.dumps(to_json(rs), sort_keys=True)
