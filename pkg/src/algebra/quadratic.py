import math
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Any, Tuple, Union

import sympy

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def _is_squarefree(d: int) -> bool:
    return d > 1 and all(e == 1 for e in sympy.factorint(d).values())


def parse_rational(text: Any) -> Fraction:
    """Parse "p/q", an integer or a [p, q] pair into a Fraction."""
    if isinstance(text, bool):
        raise ValueError(f"Not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if isinstance(text, (list, tuple)) and len(text) == 2:
        num, den = text
        if not isinstance(num, int) or not isinstance(den, int) or den == 0:
            raise ValueError(f"Not a rational: {text!r}")
        return Fraction(num, den)
    if isinstance(text, str):
        parts = text.strip().split("/")
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            den = int(parts[1])
            if den == 0:
                raise ValueError(f"Zero denominator in {text!r}")
            return Fraction(int(parts[0]), den)
    raise ValueError(f"Not a rational: {text!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class QuadraticScalar:
    """Exact element a + b*sqrt(d) of a real quadratic field.

    Values with b == 0 are returned as plain Fractions by every arithmetic
    operation, so rational entries hash and compare like Fractions.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rational, b: Rational, d: int):
        if not _is_squarefree(d):
            raise ValueError(f"Quadratic field needs a squarefree d > 1, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    @staticmethod
    def make(a: Rational, b: Rational, d: int) -> "Scalar":
        if b == 0:
            return Fraction(a)
        return QuadraticScalar(a, b, d)

    def _coerce(self, other) -> Tuple[Fraction, Fraction]:
        if isinstance(other, QuadraticScalar):
            if other.d != self.d:
                raise ValueError(f"Cannot mix Q(sqrt({self.d})) and Q(sqrt({other.d}))")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        raise TypeError(f"Unsupported operand {type(other).__name__}")

    def __add__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticScalar.make(self.a + a, self.b + b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticScalar.make(self.a - a, self.b - b, self.d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticScalar.make(self.a * a + self.d * self.b * b,
                                    self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadraticScalar division by zero")
        return QuadraticScalar.make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadraticScalar):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QuadraticScalar division by zero")
            return QuadraticScalar.make(self.a / other, self.b / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadraticScalar):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        return scalar_sign(self)

    def __lt__(self, other) -> bool:
        return scalar_sign(self - other) < 0

    def __le__(self, other) -> bool:
        return scalar_sign(self - other) <= 0

    def __gt__(self, other) -> bool:
        return scalar_sign(self - other) > 0

    def __ge__(self, other) -> bool:
        return scalar_sign(self - other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self) -> str:
        return f"QuadraticScalar({self.a}, {self.b}, {self.d})"

    def conjugate(self) -> "QuadraticScalar":
        return QuadraticScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def embeddings(self) -> Tuple[float, float]:
        root = math.sqrt(self.d)
        return (float(self.a) + float(self.b) * root,
                float(self.a) - float(self.b) * root)

    def to_sympy(self):
        return sympy.Rational(self.a.numerator, self.a.denominator) + \
            sympy.Rational(self.b.numerator, self.b.denominator) * sympy.sqrt(self.d)


Scalar = Union[Fraction, QuadraticScalar]


def as_scalar(x: Any) -> Scalar:
    if isinstance(x, QuadraticScalar):
        return QuadraticScalar.make(x.a, x.b, x.d)
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"Not an exact scalar: {x!r}")


def scalar_sign(x: Scalar) -> int:
    """Exact sign of a rational or a + b*sqrt(d)."""
    if not isinstance(x, QuadraticScalar):
        return (x > 0) - (x < 0)
    sa = (x.a > 0) - (x.a < 0)
    sb = (x.b > 0) - (x.b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 against d*b^2
    lhs, rhs = x.a * x.a, x.d * x.b * x.b
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def field_degree_of(x: Scalar) -> int:
    return 2 if isinstance(x, QuadraticScalar) else 1


def field_of(values) -> int:
    """Common squarefree d of a collection of scalars, 1 when all rational."""
    d = 1
    for x in values:
        if isinstance(x, QuadraticScalar):
            if d not in (1, x.d):
                raise ValueError(f"Entries mix Q(sqrt({d})) and Q(sqrt({x.d}))")
            d = x.d
    return d


def conjugate(x: Scalar) -> Scalar:
    return x.conjugate() if isinstance(x, QuadraticScalar) else x


def embeddings(x: Scalar) -> Tuple[float, float]:
    if isinstance(x, QuadraticScalar):
        return x.embeddings()
    return float(x), float(x)


def is_algebraic_integer(x: Scalar) -> bool:
    """Membership in the ring of integers: trace and norm must be integers."""
    if isinstance(x, QuadraticScalar):
        return x.trace().denominator == 1 and x.norm().denominator == 1
    return Fraction(x).denominator == 1


def height_bits(x: Scalar) -> int:
    """Largest bit length among the numerators and denominators of x."""
    if isinstance(x, QuadraticScalar):
        parts = (x.a, x.b)
    else:
        parts = (Fraction(x),)
    return max(max(abs(p.numerator).bit_length(), p.denominator.bit_length()) for p in parts)


def denominator(x: Scalar) -> int:
    if isinstance(x, QuadraticScalar):
        return math.lcm(x.a.denominator, x.b.denominator)
    return Fraction(x).denominator


def exact_sqrt(x: Rational, d: int = 1) -> Scalar:
    """Square root of a nonnegative rational inside Q or Q(sqrt(d)).

    Raises ValueError when the root does not lie in the requested field.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError(f"Negative radicand {x}")
    num_root = math.isqrt(x.numerator)
    den_root = math.isqrt(x.denominator)
    if num_root * num_root == x.numerator and den_root * den_root == x.denominator:
        return Fraction(num_root, den_root)
    if d > 1:
        y = x / d
        num_root = math.isqrt(y.numerator)
        den_root = math.isqrt(y.denominator)
        if num_root * num_root == y.numerator and den_root * den_root == y.denominator:
            return QuadraticScalar(0, Fraction(num_root, den_root), d)
    raise ValueError(f"sqrt({x}) is not in Q(sqrt({d}))")


def parse_scalar(entry: Any) -> Scalar:
    """Parse a measure-file entry: "p/q" or {"rat": [p, q], "quad": {"d", "p2", "q2"}}."""
    if isinstance(entry, dict):
        unknown = set(entry) - {"rat", "quad"}
        if unknown:
            raise ValueError(f"Unknown scalar fields: {sorted(unknown)}")
        a = parse_rational(entry.get("rat", "0"))
        quad = entry.get("quad")
        if quad is None:
            return a
        try:
            d = int(quad["d"])
            b = Fraction(int(quad["p2"]), int(quad["q2"]))
        except (KeyError, TypeError, ZeroDivisionError) as e:
            raise ValueError(f"Malformed quadratic part {quad!r}: {e}")
        return QuadraticScalar.make(a, b, d)
    return parse_rational(entry)


def format_scalar(x: Scalar) -> Any:
    if isinstance(x, QuadraticScalar):
        return {
            "rat": [x.a.numerator, x.a.denominator],
            "quad": {"d": x.d, "p2": x.b.numerator, "q2": x.b.denominator}
        }
    return format_rational(x)
