import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..algebra.linalg import Matrix, as_matrix, det, identity, inverse, matmul, mat_sub, wedge_power
from ..algebra.quadratic import (
    denominator, embeddings, format_scalar, height_bits, is_algebraic_integer, parse_scalar
)
from ..errors import HeightOverflow, InvalidMeasureFile, NotSymmetric, ParseError

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


@dataclass
class WordBall:
    """Distinct products of at most ``radius`` generators, each with a shortest word."""
    generators: List[Matrix]
    radius: int
    levels: List[List[Tuple[Matrix, Word]]]

    @property
    def elements(self) -> List[Tuple[Matrix, Word]]:
        return [entry for level in self.levels for entry in level]

    @property
    def matrices(self) -> List[Matrix]:
        return [m for m, _ in self.elements]

    @property
    def dimension(self) -> int:
        return len(self.generators[0])

    def __len__(self) -> int:
        return sum(len(level) for level in self.levels)

    def sphere_sizes(self) -> List[int]:
        return [len(level) for level in self.levels]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'radius': self.radius,
            'generators': len(self.generators),
            'size': len(self),
            'sphere_sizes': self.sphere_sizes()
        }


def free_ball_size(generators: int, radius: int) -> int:
    """|B(n)| in the free group on a symmetric set of the given size."""
    if generators == 2:
        return 2 * radius + 1
    k = generators - 1
    return 1 + generators * (k ** radius - 1) // (k - 1)


def check_symmetric(generators: Sequence[Matrix]) -> None:
    present = set(generators)
    for i, g in enumerate(generators):
        if inverse(g) not in present:
            raise ValueError(f"Generator {i} has no inverse in the set")


def word_ball(generators: Sequence[Sequence[Sequence]], radius: int, height_budget: int = 4096) -> WordBall:
    """Breadth-first ball of the given radius in the word metric, deduplicated by exact matrix equality."""
    if radius < 0:
        raise ValueError(f"Radius must be nonnegative, got {radius}")
    gens = [as_matrix(g) for g in generators]
    if not gens:
        raise ValueError("Word ball needs at least one generator")
    check_symmetric(gens)
    e = identity(len(gens[0]))
    seen = {e}
    levels: List[List[Tuple[Matrix, Word]]] = [[(e, ())]]
    for n in range(1, radius + 1):
        level = []
        for m, word in levels[-1]:
            for index, g in enumerate(gens):
                product = matmul(m, g)
                if product in seen:
                    continue
                bits = max(height_bits(x) for row in product for x in row)
                if bits > height_budget:
                    raise HeightOverflow(f"Word of length {n} has {bits}-bit entries (budget {height_budget})",
                                         details={'n': n, 'bits': bits}, module="stabcert")
                seen.add(product)
                level.append((product, word + (index,)))
        levels.append(level)
        logger.debug(f"Sphere of radius {n}: {len(level)} new elements")
    logger.info(f"Word ball of radius {radius} over {len(gens)} generators has {len(seen)} elements")
    return WordBall(generators=gens, radius=radius, levels=levels)


def _size(x) -> float:
    return max(abs(v) for v in embeddings(x))


@dataclass
class HeightLedger:
    """Size bookkeeping for q^n P(w) = q^n (wedge^ell w - I) over the words w of length n."""
    q: int
    denominator_lcm: int
    magnitude: float
    ell: int = 1
    records: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def sound(self) -> bool:
        return all(r['integral'] and r['within_bound'] for r in self.records)

    @property
    def submultiplicative(self) -> bool:
        return all(later['max_word_size'] <= self.q ** 2 * earlier['max_word_size'] * (1 + 1e-12)
                   for earlier, later in zip(self.records, self.records[1:]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'q': self.q,
            'ell': self.ell,
            'denominator_lcm': self.denominator_lcm,
            'magnitude': self.magnitude,
            'sound': self.sound,
            'submultiplicative': self.submultiplicative,
            'records': self.records
        }


def ledger_modulus(generators: Sequence[Matrix], ell: int = 1) -> Tuple[int, int, float]:
    """q = L^ell * (ceil(C(d, ell) * ell! * M^ell) + 1).

    L is the lcm of entry denominators and M the largest conjugate size. A minor of order ell has
    at most ell! terms, so every entry of wedge^ell g is bounded by ell! * M^ell and the entries of
    wedge^ell w for a word of length n have denominators dividing L^(ell n).
    """
    d = len(generators[0])
    if not 1 <= ell <= d:
        raise ValueError(f"Exterior power {ell} out of range for dimension {d}")
    entries = [x for g in generators for row in g for x in row]
    lcm = math.lcm(*(denominator(x) for x in entries))
    magnitude = max(_size(x) for x in entries)
    growth = math.comb(d, ell) * math.factorial(ell) * magnitude ** ell
    return lcm ** ell * (math.ceil(growth) + 1), lcm, magnitude


def height_ledger(ball: WordBall, q: int = None, ell: int = 1) -> HeightLedger:
    """Check integrality and the q^(2n) size bound of q^n (wedge^ell w - I) for every word in the ball."""
    computed, lcm, magnitude = ledger_modulus(ball.generators, ell)
    q = computed if q is None else q
    ledger = HeightLedger(q=q, denominator_lcm=lcm, magnitude=magnitude, ell=ell)
    e = identity(math.comb(ball.dimension, ell))
    for n, level in enumerate(ball.levels):
        scale = Fraction(q) ** n
        integral, max_size, max_word_size = True, 0.0, 0.0
        for m, _ in level:
            w = wedge_power(m, ell) if ell > 1 else m
            scaled = [x * scale for row in mat_sub(w, e) for x in row]
            integral = integral and all(is_algebraic_integer(x) for x in scaled)
            max_size = max(max_size, max((_size(x) for x in scaled), default=0.0))
            max_word_size = max(max_word_size, max(_size(x * scale) for row in w for x in row))
        ledger.records.append({
            'n': n,
            'words': len(level),
            'integral': integral,
            'max_size': max_size,
            'max_word_size': max_word_size,
            'bound': float(q) ** (2 * n),
            'within_bound': max_size <= float(q) ** (2 * n)
        })
    if not ledger.sound:
        logger.warning(f"Height ledger with q = {q} and ell = {ell} fails on the ball of radius {ball.radius}")
    return ledger


def format_matrix(m: Matrix) -> List[List[Any]]:
    return [[format_scalar(x) for x in row] for row in m]


@dataclass
class GeneratorSet:
    """Symmetric generating set read from a generator file, with an optional subspace guess."""
    generators: List[Matrix]
    subspace: Optional[List[Tuple]] = None
    label: str = ""


def _matrix(rows: Any, pointer: str) -> Matrix:
    if not isinstance(rows, list) or not rows or any(not isinstance(r, list) for r in rows):
        raise ParseError(f"{pointer} must be a nonempty list of rows", details={'pointer': pointer})
    parsed = []
    for r, row in enumerate(rows):
        entries = []
        for c, x in enumerate(row):
            try:
                entries.append(parse_scalar(x))
            except (ValueError, TypeError, ZeroDivisionError) as e:
                raise ParseError(f"Invalid entry at {pointer}/{r}/{c}: {e}", details={'pointer': f"{pointer}/{r}/{c}"})
        parsed.append(tuple(entries))
    return tuple(parsed)


def parse_generators(data: Dict[str, Any]) -> GeneratorSet:
    """{"matrices": [...], "add_inverses": bool, "subspace": [[...]]} with exact entries."""
    if not isinstance(data, dict):
        raise ParseError("Generator document must be an object", details={'pointer': ""})
    matrices_data = data.get('matrices')
    if not isinstance(matrices_data, list) or not matrices_data:
        raise ParseError("Generator file needs a nonempty matrices list", details={'pointer': "/matrices"})
    generators = [_matrix(rows, f"/matrices/{i}") for i, rows in enumerate(matrices_data)]
    d = len(generators[0])
    for i, g in enumerate(generators):
        if len(g) != d or any(len(row) != d for row in g):
            raise ParseError(f"All matrices must be {d}x{d}", details={'pointer': f"/matrices/{i}"})
        if det(g) == 0:
            raise ParseError(f"Matrix {i} is not invertible", details={'pointer': f"/matrices/{i}"})

    if data.get('add_inverses', False):
        for g in list(generators):
            g_inv = inverse(g)
            if g_inv not in generators:
                generators.append(g_inv)
    try:
        check_symmetric(generators)
    except ValueError as e:
        raise NotSymmetric(f"Generating set is not symmetric: {e}", details={'pointer': "/matrices"})

    subspace = None
    if data.get('subspace') is not None:
        subspace = list(_matrix(data['subspace'], "/subspace"))
        if any(len(row) != d for row in subspace):
            raise ParseError(f"Subspace basis vectors must have length {d}", details={'pointer': "/subspace"})
    return GeneratorSet(generators=generators, subspace=subspace, label=str(data.get('label', "")))


def load_generators(path: Union[str, Path]) -> GeneratorSet:
    path = Path(path)
    if not path.is_file():
        raise InvalidMeasureFile(f"Generator file not found: {path}", details={'path': str(path)})
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise InvalidMeasureFile(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}",
                                 details={'path': str(path), 'line': e.lineno, 'column': e.colno})
    generator_set = parse_generators(data)
    logger.info(f"Loaded {len(generator_set.generators)} generators from {path}")
    return generator_set
