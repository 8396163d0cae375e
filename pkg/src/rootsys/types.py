import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Tuple, Union

from ..algebra.linalg import Matrix, identity, matmul
from ..algebra.quadratic import format_rational
from ..errors import InadmissibleSpec

logger = logging.getLogger(__name__)

RationalVector = Tuple[Fraction, ...]

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")


def vec_add(u: RationalVector, v: RationalVector) -> RationalVector:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: RationalVector, v: RationalVector) -> RationalVector:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v: RationalVector) -> RationalVector:
    return tuple(c * x for x in v)


def vec_neg(v: RationalVector) -> RationalVector:
    return tuple(-x for x in v)


def is_zero(v: RationalVector) -> bool:
    return all(x == 0 for x in v)


@dataclass(frozen=True)
class RootSystemSpec:
    family: str
    rank: int

    def __post_init__(self):
        family = str(self.family).upper()
        object.__setattr__(self, 'family', family)
        if family not in FAMILIES:
            raise InadmissibleSpec(f"Unknown root system family {self.family!r}",
                                   details={'family': self.family, 'rank': self.rank})
        if not isinstance(self.rank, int) or isinstance(self.rank, bool):
            raise InadmissibleSpec(f"Rank must be an integer, got {self.rank!r}",
                                   details={'family': family, 'rank': self.rank})
        admissible = {
            "A": self.rank >= 1,
            "B": self.rank >= 2,
            "C": self.rank >= 2,
            "D": self.rank >= 4,
            "E": self.rank in (6, 7, 8),
            "F": self.rank == 4,
            "G": self.rank == 2,
        }[family]
        if not admissible:
            raise InadmissibleSpec(f"Rank {self.rank} is not admissible for family {family}",
                                   details={'family': family, 'rank': self.rank})

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "RootSystemSpec":
        text = text.strip().upper()
        try:
            return cls(text[0], int(text[1:]))
        except (IndexError, ValueError):
            raise InadmissibleSpec(f"Cannot parse root system name {text!r}")


@dataclass(frozen=True)
class Weight:
    """A weight in ambient coordinates together with its fundamental-weight coordinates."""
    coords: RationalVector
    fw_coords: RationalVector

    @property
    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.fw_coords)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.fw_coords)

    def to_dict(self) -> Dict:
        return {
            'coords': [format_rational(x) for x in self.coords],
            'fw_coords': [format_rational(x) for x in self.fw_coords]
        }


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element stored as its permutation of the root list.

    ``permutation[k]`` is the index of w(root_k). ``word`` lists simple
    reflection indices, w = s_{word[0]} s_{word[1]} ...
    """
    permutation: Tuple[int, ...]
    word: Tuple[int, ...] = field(compare=False)
    reflections: Tuple[Matrix, ...] = field(compare=False, repr=False, hash=False)

    @cached_property
    def matrix(self) -> Matrix:
        dim = len(self.reflections[0]) if self.reflections else 0
        result = identity(dim)
        for i in self.word:
            result = matmul(result, self.reflections[i])
        return result

    def apply(self, v: RationalVector) -> RationalVector:
        return tuple(sum((m * x for m, x in zip(row, v)), Fraction(0)) for row in self.matrix)

    def compose(self, other: "WeylElement") -> "WeylElement":
        """self after other."""
        return WeylElement(
            permutation=tuple(self.permutation[k] for k in other.permutation),
            word=self.word + other.word,
            reflections=self.reflections
        )

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.permutation)
        for k, image in enumerate(self.permutation):
            inv[image] = k
        return WeylElement(permutation=tuple(inv), word=tuple(reversed(self.word)),
                           reflections=self.reflections)

    @property
    def is_identity(self) -> bool:
        return all(k == image for k, image in enumerate(self.permutation))


@dataclass(frozen=True)
class Fundamental:
    """The highest root is the fundamental weight omega_index."""
    index: int
    omega: Weight

    kind = "Fundamental"

    def to_dict(self) -> Dict:
        return {'kind': self.kind, 'omega': self.index + 1, 'weight': self.omega.to_dict()}


@dataclass(frozen=True)
class SumDual:
    """The highest root is omega + omega*, with omega* the dual of omega."""
    index: int
    dual_index: int
    omega: Weight
    omega_dual: Weight

    kind = "SumDual"

    @property
    def self_dual(self) -> bool:
        return self.index == self.dual_index

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind,
            'omega': self.index + 1,
            'omega_dual': self.dual_index + 1,
            'self_dual': self.self_dual
        }


Classification = Union[Fundamental, SumDual]


@dataclass
class RootSystem:
    """Exact data of one irreducible reduced root system.

    Inner products use the ambient dot product times ``form_scale``, chosen so
    long roots have squared length 2. Roots are ordered positives first, by
    height and then simple coordinates; ``all_roots[k + N]`` is the negative of
    ``all_roots[k]`` where N is the number of positive roots.
    """
    spec: RootSystemSpec
    ambient_dim: int
    form_scale: Fraction
    simple_roots: Tuple[RationalVector, ...]
    all_roots: Tuple[RationalVector, ...]
    simple_coords: Tuple[Tuple[Fraction, ...], ...]
    fundamental_weights: Tuple[RationalVector, ...]
    cartan_matrix: Tuple[Tuple[int, ...], ...]
    highest_root: RationalVector
    rho: RationalVector
    root_index: Dict[RationalVector, int] = field(repr=False)
    cache: Dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def num_positive(self) -> int:
        return len(self.all_roots) // 2

    @property
    def positive_roots(self) -> Tuple[RationalVector, ...]:
        return self.all_roots[:self.num_positive]

    @property
    def highest_root_index(self) -> int:
        return self.root_index[self.highest_root]

    def inner(self, u: RationalVector, v: RationalVector) -> Fraction:
        return self.form_scale * sum((x * y for x, y in zip(u, v)), Fraction(0))

    def norm(self, v: RationalVector) -> float:
        return math.sqrt(float(self.inner(v, v)))

    def coroot_pairing(self, v: RationalVector, alpha: RationalVector) -> Fraction:
        """<v, alpha^vee> = 2<v, alpha>/<alpha, alpha>."""
        return 2 * self.inner(v, alpha) / self.inner(alpha, alpha)

    def reflect(self, v: RationalVector, alpha: RationalVector) -> RationalVector:
        return vec_sub(v, vec_scale(self.coroot_pairing(v, alpha), alpha))

    def fw_coords(self, v: RationalVector) -> RationalVector:
        return tuple(self.coroot_pairing(v, a) for a in self.simple_roots)

    def from_fw_coords(self, coords) -> RationalVector:
        result = tuple(Fraction(0) for _ in range(self.ambient_dim))
        for c, omega in zip(coords, self.fundamental_weights):
            result = vec_add(result, vec_scale(Fraction(c), omega))
        return result

    def weight(self, v) -> Weight:
        v = tuple(Fraction(x) for x in v)
        return Weight(coords=v, fw_coords=self.fw_coords(v))

    def weight_from_fw(self, coords) -> Weight:
        return self.weight(self.from_fw_coords(coords))

    def is_dominant(self, v: RationalVector) -> bool:
        return all(c >= 0 for c in self.fw_coords(v))

    def height(self, root: RationalVector) -> Fraction:
        return sum(self.simple_coords[self.root_index[root]], Fraction(0))

    def is_root(self, v: RationalVector) -> bool:
        return v in self.root_index

    def roots_as_list(self) -> List[RationalVector]:
        return list(self.all_roots)
