import logging
from dataclasses import dataclass
from fractions import Fraction
from math import inf, sqrt
from typing import Any, Dict, List, Optional, Tuple, Union

import sympy

from ..algebra.quadratic import QuadraticScalar, Rational, Scalar, format_rational
from ..errors import NoExpandingPlace, NotPrime

logger = logging.getLogger(__name__)


def check_prime(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not sympy.isprime(p):
        raise NotPrime(f"{p!r} is not a prime", details={'p': str(p)})
    return p


def padic_valuation(x: Rational, p: int) -> Union[int, float]:
    """v_p(x) for a rational x; infinity for 0."""
    check_prime(p)
    x = Fraction(x)
    if x == 0:
        return inf
    return sympy.multiplicity(p, abs(x.numerator)) - sympy.multiplicity(p, x.denominator)


def padic_abs(x: Rational, p: int) -> Fraction:
    """|x|_p = p^(-v_p(x)), exact."""
    v = padic_valuation(x, p)
    if v == inf:
        return Fraction(0)
    return Fraction(p) ** -v


@dataclass(frozen=True)
class PadicScalar:
    """A rational viewed in Q_p; the precision bounds only the printed expansion."""
    value: Fraction
    p: int
    precision: int = 64

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, 'value', Fraction(self.value))

    @property
    def valuation(self) -> Union[int, float]:
        return padic_valuation(self.value, self.p)

    def __abs__(self) -> Fraction:
        return padic_abs(self.value, self.p)

    def _check(self, other: "PadicScalar"):
        if other.p != self.p:
            raise ValueError(f"Cannot combine elements of Q_{self.p} and Q_{other.p}")

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        self._check(other)
        return PadicScalar(self.value + other.value, self.p, min(self.precision, other.precision))

    def __mul__(self, other: "PadicScalar") -> "PadicScalar":
        self._check(other)
        return PadicScalar(self.value * other.value, self.p, min(self.precision, other.precision))

    def digits(self) -> List[int]:
        """Base-p digits a_v, a_(v+1), ... of x = sum a_k p^k, up to the precision."""
        if self.value == 0:
            return []
        v = self.valuation
        # unit part u = x / p^v is a p-adic unit; expand it digit by digit
        u = self.value / Fraction(self.p) ** v
        digits = []
        for _ in range(self.precision):
            # a = u mod p, using the inverse of the denominator modulo p
            a = (u.numerator * pow(u.denominator, -1, self.p)) % self.p
            digits.append(a)
            u = (u - a) / self.p
            if u == 0:
                break
        return digits

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': format_rational(self.value),
            'p': self.p,
            'valuation': self.valuation if self.value != 0 else None,
            'abs': format_rational(abs(self)),
            'digits': self.digits()
        }


@dataclass
class Place:
    """An absolute value of Q or Q(sqrt d) where some element is large."""
    kind: str
    abs_value: float
    prime: Optional[int] = None
    embedding: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        result = {'kind': self.kind, 'abs_value': self.abs_value}
        if self.prime is not None:
            result['prime'] = self.prime
        if self.embedding is not None:
            result['embedding'] = self.embedding
        return result


def _denominator_primes(*values: Fraction) -> List[int]:
    primes = set()
    for x in values:
        primes.update(sympy.primefactors(Fraction(x).denominator))
    return sorted(primes)


def quadratic_root_valuation(trace: Fraction, norm: Fraction, p: int) -> Fraction:
    """Smallest valuation among the roots of x^2 - trace*x + norm over Q_p, read off the Newton polygon."""
    v0 = padic_valuation(norm, p)
    v1 = padic_valuation(trace, p)
    if v1 != inf and v1 < Fraction(v0, 2):
        return Fraction(min(v0 - v1, v1))
    return Fraction(v0, 2)


def find_expanding_place(x: Union[Rational, QuadraticScalar]) -> Place:
    """A place v with |x|_v > 1; archimedean first, then the smallest prime."""
    if x == 0:
        raise ValueError("Zero has no expanding place")
    if isinstance(x, QuadraticScalar):
        for index, value in enumerate(x.embeddings()):
            if abs(value) > 1:
                return Place(kind="archimedean", abs_value=abs(value), embedding=index)
        trace, norm = x.trace(), x.norm()
        for p in _denominator_primes(trace, norm):
            v = quadratic_root_valuation(trace, norm, p)
            if v < 0:
                return Place(kind="padic", abs_value=float(p) ** float(-v), prime=p)
        raise NoExpandingPlace(f"{x} is a root of unity", details={'value': repr(x)})

    x = Fraction(x)
    if abs(x) > 1:
        return Place(kind="archimedean", abs_value=float(abs(x)), embedding=0)
    for p in _denominator_primes(x):
        return Place(kind="padic", abs_value=float(padic_abs(x, p)), prime=p)
    raise NoExpandingPlace(f"{format_rational(x)} is a root of unity", details={'value': format_rational(x)})



def quadratic_roots(trace: Rational, norm: Rational) -> Tuple[Scalar, Scalar]:
    """Exact real roots of x^2 - trace*x + norm, larger first; ValueError for a complex pair."""
    trace, norm = Fraction(trace), Fraction(norm)
    disc = trace * trace - 4 * norm
    if disc < 0:
        raise ValueError(f"x^2 - {trace}x + {norm} has complex roots")
    half = trace / 2
    if disc == 0:
        return half, half
    radicand = disc.numerator * disc.denominator
    squarefree, square_root = 1, 1
    for prime, exponent in sympy.factorint(radicand).items():
        square_root *= prime ** (exponent // 2)
        if exponent % 2:
            squarefree *= prime
    # sqrt(disc) = square_root * sqrt(squarefree) / disc.denominator
    offset = Fraction(square_root, 2 * disc.denominator)
    if squarefree == 1:
        return half + offset, half - offset
    return QuadraticScalar(half, offset, squarefree), QuadraticScalar(half, -offset, squarefree)


def eigenvalue_place(trace: Rational, norm: Rational) -> Place:
    """An expanding place for some root of x^2 - trace*x + norm, real or complex."""
    trace, norm = Fraction(trace), Fraction(norm)
    if trace * trace - 4 * norm >= 0:
        for root in quadratic_roots(trace, norm):
            try:
                return find_expanding_place(root)
            except NoExpandingPlace:
                continue
    else:
        # complex pair: both roots have archimedean size sqrt(norm)
        if norm > 1:
            return Place(kind="archimedean", abs_value=sqrt(float(norm)), embedding=0)
        for p in _denominator_primes(trace, norm):
            v = quadratic_root_valuation(trace, norm, p)
            if v < 0:
                return Place(kind="padic", abs_value=float(p) ** float(-v), prime=p)
    raise NoExpandingPlace(f"Roots of x^2 - {format_rational(trace)}x + {format_rational(norm)} are units everywhere",
                           details={'trace': format_rational(trace), 'norm': format_rational(norm)})
