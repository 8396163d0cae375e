import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from ..errors import EmptyCloud
from ..measures import GroupElement, MeasureSpec, canonicalize_quaternions, multiply_quaternion_arrays

logger = logging.getLogger(__name__)


def check_scale(delta: float):
    if not 0 < delta <= np.pi:
        raise ValueError(f"Scale must lie in (0, pi], got {delta}")


def chord_radius(delta: float) -> float:
    """Euclidean radius in R^4 matching angle distance delta in SO(3).

    For unit quaternions, angle(p^-1 q) <= delta iff min(|p - q|, |p + q|) <= 2 sin(delta/4).
    """
    return 2.0 * np.sin(min(delta, np.pi) / 4.0)


def ball_volume(radius: float) -> float:
    """Normalized Haar mass of an SO(3) ball of the given angle radius."""
    r = min(radius, np.pi)
    return float((r - np.sin(r)) / np.pi)


def sample_ball(center, delta: float, count: int, seed: int) -> np.ndarray:
    """Haar-uniform samples of the SO(3) ball of radius delta around center.

    The rotation angle has density proportional to 1 - cos(t) on [0, delta];
    it is drawn by rejection against the uniform density.
    """
    check_scale(delta)
    rng = np.random.default_rng([seed, count])
    angles: List[np.ndarray] = []
    drawn = 0
    while drawn < count:
        t = rng.uniform(0.0, delta, size=2 * (count - drawn) + 16)
        keep = t[rng.uniform(size=t.size) * (1 - np.cos(delta)) <= 1 - np.cos(t)]
        angles.append(keep)
        drawn += keep.size
    t = np.concatenate(angles)[:count]
    axes = rng.standard_normal((count, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    local = np.column_stack([np.cos(t / 2), np.sin(t / 2)[:, None] * axes])
    center = center.float_quaternion if isinstance(center, GroupElement) else np.asarray(center, dtype=float)
    return multiply_quaternion_arrays(center[None, :], local)


@dataclass
class PointCloud:
    """Weighted finite set of rotations, stored as sign-canonical unit quaternions."""
    quaternions: np.ndarray
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        q = np.asarray(self.quaternions, dtype=float).reshape(-1, 4)
        if len(q):
            q = canonicalize_quaternions(q / np.linalg.norm(q, axis=1, keepdims=True))
        self.quaternions = q
        if self.weights is None:
            self.weights = np.full(len(q), 1.0 / len(q)) if len(q) else np.zeros(0)
        else:
            self.weights = np.asarray(self.weights, dtype=float)
            if self.weights.shape != (len(q),):
                raise ValueError(f"{len(q)} points but {self.weights.size} weights")
            if np.any(self.weights < 0):
                raise ValueError("Point weights must be nonnegative")

    @property
    def size(self) -> int:
        return len(self.quaternions)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def uniform(self) -> bool:
        return self.size > 0 and bool(np.allclose(self.weights, self.weights[0]))

    def require_points(self):
        if self.size == 0:
            raise EmptyCloud("Point cloud is empty")

    def subset(self, indices) -> "PointCloud":
        return PointCloud(self.quaternions[indices], self.weights[indices])

    @classmethod
    def from_measure(cls, measure: MeasureSpec) -> "PointCloud":
        return cls(measure.quaternions, measure.float_weights)

    @classmethod
    def from_elements(cls, elements: Sequence[GroupElement]) -> "PointCloud":
        return cls(np.array([g.float_quaternion for g in elements]).reshape(-1, 4))

    @classmethod
    def identity(cls) -> "PointCloud":
        return cls(np.array([[1.0, 0.0, 0.0, 0.0]]))

    def to_dict(self) -> Dict[str, Any]:
        return {'points': self.size, 'total_mass': self.total_mass}


class NeighborIndex:
    """Delta-neighborhood queries on SO(3) through a k-d tree over both quaternion lifts."""

    def __init__(self, quaternions: np.ndarray, workers: int = 1):
        q = np.asarray(quaternions, dtype=float).reshape(-1, 4)
        self.size = len(q)
        self.workers = workers
        self.tree = cKDTree(np.vstack([q, -q]))

    def ball(self, points: np.ndarray, delta: float) -> List[np.ndarray]:
        """Indices of indexed points within angle distance delta of each query point."""
        raw = self.tree.query_ball_point(np.atleast_2d(points), chord_radius(delta), workers=self.workers)
        return [np.unique(np.asarray(r, dtype=int) % self.size) for r in raw]

    def counts(self, points: np.ndarray, delta: float) -> np.ndarray:
        # 2 sin(delta/4) < sqrt(2), so at most one lift of each point is in range
        return np.asarray(self.tree.query_ball_point(np.atleast_2d(points), chord_radius(delta),
                                                     return_length=True, workers=self.workers))

    def masses(self, points: np.ndarray, weights: np.ndarray, delta: float) -> np.ndarray:
        """Total weight of indexed points within delta of each query point."""
        return np.array([weights[idx].sum() for idx in self.ball(points, delta)])
