import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..algebra.linalg import Matrix, det, identity, matmul, transpose
from ..algebra.quadratic import QuadraticScalar, format_scalar, height_bits

logger = logging.getLogger(__name__)

GROUPS = ("SU2", "SO3")
UNIT_TOLERANCE = 1e-10


def is_exact(x: Any) -> bool:
    return isinstance(x, (Fraction, QuadraticScalar)) or (isinstance(x, int) and not isinstance(x, bool))


def quaternion_multiply(p: Sequence, q: Sequence) -> Tuple:
    """Hamilton product; works for exact scalars and floats alike."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def quaternion_to_rotation(q: Sequence) -> Tuple[Tuple, ...]:
    """Rotation matrix of a unit quaternion (a, b, c, d) = cos(t/2) + sin(t/2) n."""
    a, b, c, d = q
    return (
        (a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)),
        (2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)),
        (2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d),
    )


def rotation_to_quaternion(m: np.ndarray) -> np.ndarray:
    """One of the two unit quaternions lifting a float rotation matrix."""
    m = np.asarray(m, dtype=float)
    trace = np.trace(m)
    if trace > 0:
        s = 2.0 * np.sqrt(trace + 1.0)
        q = [0.25 * s, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s]
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = 2.0 * np.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2])
        q = [(m[2, 1] - m[1, 2]) / s, 0.25 * s, (m[0, 1] + m[1, 0]) / s, (m[0, 2] + m[2, 0]) / s]
    elif m[1, 1] > m[2, 2]:
        s = 2.0 * np.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2])
        q = [(m[0, 2] - m[2, 0]) / s, (m[0, 1] + m[1, 0]) / s, 0.25 * s, (m[1, 2] + m[2, 1]) / s]
    else:
        s = 2.0 * np.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1])
        q = [(m[1, 0] - m[0, 1]) / s, (m[0, 2] + m[2, 0]) / s, (m[1, 2] + m[2, 1]) / s, 0.25 * s]
    q = np.array(q)
    return q / np.linalg.norm(q)


def multiply_quaternion_arrays(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise Hamilton product of two (..., 4) float arrays."""
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ], axis=-1)


def canonicalize_quaternions(q: np.ndarray) -> np.ndarray:
    """Pick the sign with nonnegative scalar part, so q and -q hash to one rotation."""
    q = np.atleast_2d(np.asarray(q, dtype=float))
    flip = q[:, 0] < 0
    q = q.copy()
    q[flip] *= -1
    return q


def rotation_angle(q: np.ndarray) -> np.ndarray:
    """Rotation angle in [0, pi] of the SO(3) image of each quaternion row."""
    q = np.atleast_2d(np.asarray(q, dtype=float))
    return 2.0 * np.arctan2(np.linalg.norm(q[:, 1:], axis=1), np.abs(q[:, 0]))


def quaternion_distance(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Bi-invariant angle metric on SO(3) between quaternion rows."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    q = np.atleast_2d(np.asarray(q, dtype=float))
    conj = q * np.array([1.0, -1.0, -1.0, -1.0])
    return rotation_angle(multiply_quaternion_arrays(conj, p))


@dataclass(frozen=True)
class GroupElement:
    """An element of SU(2) (unit quaternion) or SO(3) (rotation matrix).

    Entries are exact (Fraction or QuadraticScalar) or floats; exact elements
    multiply exactly and compare by value.
    """
    group: str
    quaternion: Optional[Tuple] = None
    matrix: Optional[Matrix] = None

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ValueError(f"Unknown group {self.group!r}")
        if self.group == "SU2" and (self.quaternion is None or len(self.quaternion) != 4):
            raise ValueError("An SU2 element needs a quaternion with four entries")
        if self.group == "SO3" and (self.matrix is None or len(self.matrix) != 3
                                    or any(len(row) != 3 for row in self.matrix)):
            raise ValueError("An SO3 element needs a 3x3 matrix")

    @classmethod
    def from_quaternion(cls, q: Sequence, validate: bool = True) -> "GroupElement":
        element = cls(group="SU2", quaternion=tuple(q))
        if validate:
            element.validate()
        return element

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence], validate: bool = True) -> "GroupElement":
        element = cls(group="SO3", matrix=tuple(tuple(row) for row in m))
        if validate:
            element.validate()
        return element

    @classmethod
    def identity(cls, group: str = "SU2") -> "GroupElement":
        if group == "SU2":
            return cls(group="SU2", quaternion=(Fraction(1), Fraction(0), Fraction(0), Fraction(0)))
        return cls(group="SO3", matrix=identity(3))

    @property
    def entries(self) -> Tuple:
        if self.group == "SU2":
            return self.quaternion
        return tuple(x for row in self.matrix for x in row)

    @cached_property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.entries)

    def validate(self):
        if self.group == "SU2":
            norm = sum(x * x for x in self.quaternion)
            ok = norm == 1 if self.exact else abs(float(norm) - 1.0) <= UNIT_TOLERANCE
            if not ok:
                raise ValueError(f"Quaternion {self.quaternion} does not have unit norm")
        else:
            if self.exact:
                ok = matmul(transpose(self.matrix), self.matrix) == identity(3) and det(self.matrix) == 1
            else:
                m = np.array(self.matrix, dtype=float)
                ok = np.allclose(m.T @ m, np.eye(3), atol=UNIT_TOLERANCE) and \
                    abs(np.linalg.det(m) - 1.0) <= UNIT_TOLERANCE
            if not ok:
                raise ValueError("Matrix is not a rotation")

    def key(self) -> Tuple:
        """Hashable exact identity of the element (floats are rounded to 12 digits)."""
        if self.exact:
            return self.entries
        return tuple(round(float(x), 12) for x in self.entries)

    @cached_property
    def float_quaternion(self) -> np.ndarray:
        if self.group == "SU2":
            return np.array([float(x) for x in self.quaternion])
        return rotation_to_quaternion(self.rotation_float)

    @cached_property
    def rotation_float(self) -> np.ndarray:
        if self.group == "SO3":
            return np.array([[float(x) for x in row] for row in self.matrix])
        return np.array(quaternion_to_rotation(self.float_quaternion))

    @cached_property
    def rotation(self) -> Tuple[Tuple, ...]:
        """Rotation matrix, exact when the element is exact."""
        if self.group == "SO3":
            return self.matrix
        if self.exact:
            return quaternion_to_rotation(self.quaternion)
        return tuple(tuple(row) for row in self.rotation_float.tolist())

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.group != other.group:
            raise ValueError(f"Cannot multiply {self.group} and {other.group} elements")
        if not (self.exact and other.exact):
            if self.group == "SU2":
                q = multiply_quaternion_arrays(self.float_quaternion, other.float_quaternion)
                return GroupElement(group="SU2", quaternion=tuple(float(x) for x in q))
            m = self.rotation_float @ other.rotation_float
            return GroupElement(group="SO3", matrix=tuple(tuple(float(x) for x in row) for row in m))
        if self.group == "SU2":
            return GroupElement(group="SU2", quaternion=quaternion_multiply(self.quaternion, other.quaternion))
        return GroupElement(group="SO3", matrix=matmul(self.matrix, other.matrix))

    def inverse(self) -> "GroupElement":
        if self.group == "SU2":
            a, b, c, d = self.quaternion
            return GroupElement(group="SU2", quaternion=(a, -b, -c, -d))
        return GroupElement(group="SO3", matrix=transpose(self.matrix))

    def to_float(self) -> "GroupElement":
        if self.group == "SU2":
            return GroupElement(group="SU2", quaternion=tuple(float(x) for x in self.quaternion))
        return GroupElement(group="SO3", matrix=tuple(tuple(float(x) for x in row) for row in self.matrix))

    def height_bits(self) -> int:
        if not self.exact:
            return 0
        return max(height_bits(x) for x in self.entries)

    def is_identity(self) -> bool:
        if self.exact:
            return self.key() == GroupElement.identity(self.group).key()
        return float(rotation_angle(self.float_quaternion)[0]) <= UNIT_TOLERANCE

    def to_dict(self) -> Dict[str, Any]:
        def fmt(x):
            return format_scalar(x) if is_exact(x) else float(x)
        if self.group == "SU2":
            return {'quaternion': [fmt(x) for x in self.quaternion]}
        return {'matrix': [[fmt(x) for x in row] for row in self.matrix]}
