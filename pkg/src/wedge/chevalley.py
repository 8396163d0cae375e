import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..algebra.linalg import Matrix, nullspace
from ..errors import RankTooLarge
from ..rootsys import RootSystem
from ..rootsys.types import RationalVector, vec_add, vec_neg, vec_sub

logger = logging.getLogger(__name__)

Element = Dict[int, Fraction]

DEFAULT_RANK_CAP = 4


@dataclass
class ChevalleyAlgebra:
    """Chevalley basis {h_i} + {E_alpha} of the complex simple Lie algebra of a root system.

    Basis index i < rank is the simple coroot h_i; index rank + k is E_alpha
    for alpha = rs.all_roots[k]. Structure constants satisfy
    [E_a, E_b] = N(a, b) E_{a+b} and [E_a, E_{-a}] = h_a.
    """
    rs: RootSystem
    structure_constants: Dict[Tuple[int, int], int]
    brackets: Dict[Tuple[int, int], Element] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.rs.rank

    @property
    def dim(self) -> int:
        return self.rs.rank + len(self.rs.all_roots)

    @property
    def roots(self) -> Tuple[RationalVector, ...]:
        return self.rs.all_roots

    def root_basis_index(self, root: RationalVector) -> int:
        return self.rank + self.rs.root_index[tuple(root)]

    def simple_raising(self, i: int) -> int:
        return self.root_basis_index(self.rs.simple_roots[i])

    def simple_lowering(self, i: int) -> int:
        return self.root_basis_index(vec_neg(self.rs.simple_roots[i]))

    def label(self, index: int) -> str:
        if index < self.rank:
            return f"h{index + 1}"
        coords = self.rs.simple_coords[index - self.rank]
        return "E(" + ",".join(str(c) for c in coords) + ")"

    def basis_weight(self, index: int) -> RationalVector:
        if index < self.rank:
            return tuple(Fraction(0) for _ in range(self.rs.ambient_dim))
        return self.rs.all_roots[index - self.rank]

    def N(self, alpha: RationalVector, beta: RationalVector) -> int:
        return self.structure_constants.get((self.rs.root_index[tuple(alpha)],
                                             self.rs.root_index[tuple(beta)]), 0)

    def bracket_basis(self, i: int, j: int) -> Element:
        return self.brackets.get((i, j), {})

    def bracket(self, x: Element, y: Element) -> Element:
        result: Element = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket_basis(i, j).items():
                    result[k] = result.get(k, Fraction(0)) + a * b * c
        return {k: v for k, v in result.items() if v != 0}

    def ad_matrix(self, i: int) -> Matrix:
        """Matrix of ad(basis_i): column j holds [b_i, b_j]."""
        rows = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for j in range(self.dim):
            for k, c in self.bracket_basis(i, j).items():
                rows[k][j] = c
        return tuple(tuple(row) for row in rows)

    def jacobi_defects(self) -> List[Tuple[int, int, int]]:
        """Basis triples violating the Jacobi identity (empty for a valid algebra)."""
        defects = []
        basis = [{i: Fraction(1)} for i in range(self.dim)]
        for i in range(self.dim):
            for j in range(self.dim):
                inner_jk = [self.bracket(basis[j], basis[k]) for k in range(self.dim)]
                for k in range(self.dim):
                    total: Element = {}
                    terms = (
                        self.bracket(basis[i], inner_jk[k]),
                        self.bracket(basis[j], self.bracket(basis[k], basis[i])),
                        self.bracket(basis[k], self.bracket(basis[i], basis[j])),
                    )
                    for term in terms:
                        for key, value in term.items():
                            total[key] = total.get(key, Fraction(0)) + value
                    if any(v != 0 for v in total.values()):
                        defects.append((i, j, k))
        return defects


class _StructureConstants:
    """Signs fixed by extraspecial pairs, everything else by the standard root identities."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.num_positive = rs.num_positive
        self.position = {root: k for k, root in enumerate(rs.positive_roots)}
        self.extraspecial: Dict[RationalVector, Tuple[RationalVector, RationalVector, int]] = {}
        self.cache: Dict[Tuple[RationalVector, RationalVector], int] = {}
        self._find_extraspecial_pairs()

    def norm2(self, v: RationalVector) -> Fraction:
        return self.rs.inner(v, v)

    def is_positive(self, root: RationalVector) -> bool:
        return root in self.position

    def _find_extraspecial_pairs(self):
        rs = self.rs
        for xi in rs.positive_roots:
            for alpha in rs.positive_roots:
                beta = vec_sub(xi, alpha)
                if beta in self.position and self.position[alpha] < self.position[beta]:
                    p = 0
                    while rs.is_root(vec_sub(beta, tuple((p + 1) * a for a in alpha))):
                        p += 1
                    self.extraspecial[xi] = (alpha, beta, p + 1)
                    break

    def N(self, alpha: RationalVector, beta: RationalVector) -> int:
        key = (alpha, beta)
        if key not in self.cache:
            self.cache[key] = self._compute(alpha, beta)
        return self.cache[key]

    def _compute(self, alpha: RationalVector, beta: RationalVector) -> int:
        total = vec_add(alpha, beta)
        if not self.rs.is_root(total):
            return 0

        pos_a, pos_b = self.is_positive(alpha), self.is_positive(beta)
        if pos_a and pos_b:
            return self._positive_pair(alpha, beta)
        if not pos_a and not pos_b:
            return -self.N(vec_neg(alpha), vec_neg(beta))

        # mixed signs: rotate the zero-sum triple (alpha, beta, gamma) onto a same-sign pair
        gamma = vec_neg(total)
        if self.is_positive(total):
            # beta and gamma are negative
            if pos_a:
                value = -self.N(vec_neg(beta), vec_neg(gamma)) * self.norm2(gamma) / self.norm2(alpha)
            else:
                value = -self.N(vec_neg(gamma), vec_neg(alpha)) * self.norm2(gamma) / self.norm2(beta)
        else:
            # the positive one of alpha, beta pairs with gamma
            if pos_a:
                value = self.N(gamma, alpha) * self.norm2(gamma) / self.norm2(beta)
            else:
                value = self.N(beta, gamma) * self.norm2(gamma) / self.norm2(alpha)
        return int(value)

    def _positive_pair(self, alpha: RationalVector, beta: RationalVector) -> int:
        if self.position[alpha] > self.position[beta]:
            return -self.N(beta, alpha)
        xi = vec_add(alpha, beta)
        a1, b1, value = self.extraspecial[xi]
        if (alpha, beta) == (a1, b1):
            return value

        def term(x, y, u, v, s):
            if not self.rs.is_root(s):
                return Fraction(0)
            return Fraction(self.N(x, y) * self.N(u, v)) / self.norm2(s)

        neg_a1, neg_b1 = vec_neg(a1), vec_neg(b1)
        t2 = term(beta, neg_a1, alpha, neg_b1, vec_sub(beta, a1))
        t3 = term(neg_a1, alpha, beta, neg_b1, vec_sub(alpha, a1))
        n_neg = -value
        result = -self.norm2(xi) * (t2 + t3) / n_neg
        if result.denominator != 1:
            raise ArithmeticError(f"Non-integral structure constant {result}")
        return int(result)


def chevalley_basis(rs: RootSystem, rank_cap: int = DEFAULT_RANK_CAP) -> ChevalleyAlgebra:
    """Structure constants and the full bracket table of the Chevalley basis."""
    if rs.rank > rank_cap:
        raise RankTooLarge(f"{rs.name} has rank {rs.rank}, above the wedge rank cap {rank_cap}",
                           details={'type': rs.name, 'rank_cap': rank_cap})

    solver = _StructureConstants(rs)
    roots = rs.all_roots
    r = rs.rank

    constants: Dict[Tuple[int, int], int] = {}
    for a, alpha in enumerate(roots):
        for b, beta in enumerate(roots):
            n = solver.N(alpha, beta)
            if n:
                constants[(a, b)] = n

    brackets: Dict[Tuple[int, int], Element] = {}
    for i in range(r):
        for k, alpha in enumerate(roots):
            c = rs.coroot_pairing(alpha, rs.simple_roots[i])
            if c:
                brackets[(i, r + k)] = {r + k: c}
                brackets[(r + k, i)] = {r + k: -c}

    for a, alpha in enumerate(roots):
        # [E_a, E_-a] = h_a, the coroot written in simple coroots
        b = rs.root_index[vec_neg(alpha)]
        coroot = {}
        for i, coefficient in enumerate(rs.simple_coords[a]):
            value = coefficient * rs.inner(rs.simple_roots[i], rs.simple_roots[i]) / rs.inner(alpha, alpha)
            if value:
                coroot[i] = value
        brackets[(r + a, r + b)] = coroot

    for (a, b), n in constants.items():
        target = rs.root_index[vec_add(roots[a], roots[b])]
        brackets[(r + a, r + b)] = {r + target: Fraction(n)}

    logger.info(f"Built Chevalley basis of {rs.name}: dimension {r + len(roots)}, "
                f"{len(constants)} nonzero structure constants")
    return ChevalleyAlgebra(rs=rs, structure_constants=constants, brackets=brackets)


def killing_form(alg: ChevalleyAlgebra) -> Matrix:
    """Gram matrix tr(ad b_i ad b_j) on the Chevalley basis."""
    ads = []
    for i in range(alg.dim):
        sparse = {}
        for j in range(alg.dim):
            for k, c in alg.bracket_basis(i, j).items():
                sparse[(k, j)] = c
        ads.append(sparse)
    gram = []
    for i in range(alg.dim):
        row = []
        for j in range(alg.dim):
            total = Fraction(0)
            for (k, l), c in ads[i].items():
                other = ads[j].get((l, k))
                if other:
                    total += c * other
            row.append(total)
        gram.append(tuple(row))
    return tuple(gram)


def orthogonal_complement(alg: ChevalleyAlgebra, vectors: List[Tuple[Fraction, ...]],
                          form: Optional[Matrix] = None) -> List[Tuple[Fraction, ...]]:
    """Basis of the Killing-orthogonal complement of span(vectors)."""
    gram = form if form is not None else killing_form(alg)
    rows = tuple(
        tuple(sum((v[i] * gram[i][j] for i in range(alg.dim)), Fraction(0)) for j in range(alg.dim))
        for v in vectors
    )
    return nullspace(rows, alg.dim)


def torus_action(alg: ChevalleyAlgebra, scalars) -> Matrix:
    """Ad of the torus element with character value scalars[i] on alpha_i.

    Acts trivially on the Cartan part and by prod scalars[i]^k_i on E_alpha,
    alpha = sum k_i alpha_i.
    """
    values = [Fraction(s) for s in scalars]
    if len(values) != alg.rank or any(v == 0 for v in values):
        raise ValueError(f"Need {alg.rank} nonzero character values")
    diagonal = [Fraction(1)] * alg.rank
    for coords in alg.rs.simple_coords:
        value = Fraction(1)
        for v, k in zip(values, coords):
            value *= v ** int(k)
        diagonal.append(value)
    n = alg.dim
    return tuple(tuple(diagonal[i] if i == j else Fraction(0) for j in range(n)) for i in range(n))
