import logging
import math
from collections import deque
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from ..algebra.linalg import Matrix
from ..errors import GroupTooLarge, NotDominant
from .types import RationalVector, RootSystem, Weight, WeylElement

logger = logging.getLogger(__name__)

DEFAULT_GROUP_LIMIT = 1_000_000

EXCEPTIONAL_ORDERS = {
    "E6": 51840,
    "E7": 2903040,
    "E8": 696729600,
    "F4": 1152,
    "G2": 12,
}


def weyl_group_order(rs: RootSystem) -> int:
    ell = rs.rank
    family = rs.spec.family
    if family == "A":
        return math.factorial(ell + 1)
    if family in ("B", "C"):
        return 2 ** ell * math.factorial(ell)
    if family == "D":
        return 2 ** (ell - 1) * math.factorial(ell)
    return EXCEPTIONAL_ORDERS[rs.name]


def simple_reflection_matrix(rs: RootSystem, i: int) -> Matrix:
    """Matrix of v -> v - <v, alpha_i^vee> alpha_i in ambient coordinates."""
    alpha = rs.simple_roots[i]
    factor = 2 * rs.form_scale / rs.inner(alpha, alpha)
    n = rs.ambient_dim
    return tuple(
        tuple((Fraction(1) if r == c else Fraction(0)) - factor * alpha[r] * alpha[c] for c in range(n))
        for r in range(n)
    )


def reflection_data(rs: RootSystem) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[Matrix, ...]]:
    """Root permutations and ambient matrices of the simple reflections."""
    if "reflections" in rs.cache:
        return rs.cache["reflections"]
    permutations = []
    for alpha in rs.simple_roots:
        permutations.append(tuple(rs.root_index[rs.reflect(root, alpha)] for root in rs.all_roots))
    matrices = tuple(simple_reflection_matrix(rs, i) for i in range(rs.rank))
    data = (tuple(permutations), matrices)
    rs.cache["reflections"] = data
    return data


def identity_element(rs: RootSystem) -> WeylElement:
    _, matrices = reflection_data(rs)
    return WeylElement(permutation=tuple(range(len(rs.all_roots))), word=(), reflections=matrices)


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    permutations, matrices = reflection_data(rs)
    return WeylElement(permutation=permutations[i], word=(i,), reflections=matrices)


def generate_subgroup(rs: RootSystem, generators: Sequence[int],
                      limit: int = DEFAULT_GROUP_LIMIT) -> List[WeylElement]:
    """Subgroup generated by the listed simple reflections, in breadth-first order.

    Elements are deduplicated by their root permutation, which determines the
    element uniquely since the roots span the ambient root space.
    """
    permutations, matrices = reflection_data(rs)
    start = tuple(range(len(rs.all_roots)))
    words = {start: ()}
    queue = deque([start])
    order = [start]
    while queue:
        perm = queue.popleft()
        word = words[perm]
        for i in generators:
            s = permutations[i]
            image = tuple(s[k] for k in perm)
            if image not in words:
                words[image] = (i,) + word
                order.append(image)
                queue.append(image)
                if len(order) > limit:
                    raise GroupTooLarge(
                        f"Subgroup of W({rs.name}) exceeds the limit of {limit} elements",
                        details={'type': rs.name, 'limit': limit})
    logger.debug(f"Generated {len(order)} elements of W({rs.name}) from reflections {list(generators)}")
    return [WeylElement(permutation=p, word=words[p], reflections=matrices) for p in order]


def weyl_group(rs: RootSystem, limit: int = DEFAULT_GROUP_LIMIT) -> List[WeylElement]:
    order = weyl_group_order(rs)
    if order > limit:
        raise GroupTooLarge(f"|W({rs.name})| = {order} exceeds the limit of {limit}",
                            details={'type': rs.name, 'order': order, 'limit': limit})
    elements = generate_subgroup(rs, range(rs.rank), limit)
    if len(elements) != order:
        logger.error(f"W({rs.name}) enumeration produced {len(elements)} elements, expected {order}")
    return elements


def to_dominant(rs: RootSystem, v: RationalVector) -> Tuple[RationalVector, Tuple[int, ...]]:
    """Reflect v into the closed fundamental chamber.

    Returns (dominant vector, word) with dominant = s_{word[0]} ... s_{word[-1]} v.
    """
    applied: List[int] = []
    current = tuple(Fraction(x) for x in v)
    while True:
        pairings = rs.fw_coords(current)
        negative = next((i for i, c in enumerate(pairings) if c < 0), None)
        if negative is None:
            return current, tuple(reversed(applied))
        current = rs.reflect(current, rs.simple_roots[negative])
        applied.append(negative)


def element_from_word(rs: RootSystem, word: Iterable[int]) -> WeylElement:
    result = identity_element(rs)
    for i in reversed(tuple(word)):
        result = simple_reflection(rs, i).compose(result)
    return result


def stabilizer_generators(rs: RootSystem, dominant: RationalVector) -> List[int]:
    return [i for i, c in enumerate(rs.fw_coords(dominant)) if c == 0]


def weyl_stabilizer(rs: RootSystem, v, limit: int = DEFAULT_GROUP_LIMIT) -> List[WeylElement]:
    """All w in W with w v = v.

    The stabilizer of a dominant vector is the parabolic subgroup generated by
    the simple reflections fixing it; other vectors are conjugated into the
    chamber first. GroupTooLarge is raised when the stabilizer has more than
    ``limit`` elements.
    """
    coords = v.coords if isinstance(v, Weight) else tuple(Fraction(x) for x in v)
    dominant, word = to_dominant(rs, coords)
    u = element_from_word(rs, word)
    u_inv = u.inverse()
    parabolic = generate_subgroup(rs, stabilizer_generators(rs, dominant), limit)
    if not word:
        return parabolic
    return [u_inv.compose(w).compose(u) for w in parabolic]


def dual_weight(rs: RootSystem, weight) -> Weight:
    """Dominant weight in the W-orbit of minus the given weight."""
    coords = weight.coords if isinstance(weight, Weight) else tuple(Fraction(x) for x in weight)
    dominant, _ = to_dominant(rs, tuple(-x for x in coords))
    return rs.weight(dominant)


def dual_index(rs: RootSystem, i: int) -> int:
    dual = dual_weight(rs, rs.fundamental_weights[i])
    for j, c in enumerate(dual.fw_coords):
        if c == 1:
            return j
    raise NotDominant(f"Dual of omega_{i + 1} in {rs.name} is not fundamental")


def weyl_dimension(rs: RootSystem, weight) -> int:
    """dim V_lambda = prod over positive roots of <lambda + rho, alpha> / <rho, alpha>."""
    w = weight if isinstance(weight, Weight) else rs.weight(weight)
    if not w.is_integral or not w.is_dominant:
        raise NotDominant(f"Weight with fundamental coordinates {[str(c) for c in w.fw_coords]} "
                          f"is not dominant integral",
                          details={'fw_coords': [str(c) for c in w.fw_coords]})
    shifted = tuple(x + r for x, r in zip(w.coords, rs.rho))
    dimension = Fraction(1)
    for alpha in rs.positive_roots:
        dimension *= rs.inner(shifted, alpha) / rs.inner(rs.rho, alpha)
    if dimension.denominator != 1:
        raise NotDominant(f"Weyl dimension {dimension} is not an integer")
    return int(dimension)


def dimension_constant(rs: RootSystem) -> float:
    """A constant c with dim V_lambda >= c * ||lambda|| for every dominant lambda.

    The highest-root factor of the product formula alone gives
    dim V_lambda >= <lambda, alpha~>/<rho, alpha~>, and the triangle
    inequality over fundamental weights turns that into a norm bound.
    """
    theta = rs.highest_root
    rho_theta = float(rs.inner(rs.rho, theta))
    return min(float(rs.inner(omega, theta)) / (rs.norm(omega) * rho_theta)
               for omega in rs.fundamental_weights)


def find_element(elements: Sequence[WeylElement], permutation: Tuple[int, ...]) -> Optional[WeylElement]:
    for w in elements:
        if w.permutation == permutation:
            return w
    return None
