import logging
from dataclasses import dataclass, field
from math import log2
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import TooFewSamples
from .cloud import NeighborIndex, PointCloud, ball_volume, check_scale

logger = logging.getLogger(__name__)


def greedy_centers(cloud: PointCloud, radius: float, index: Optional[NeighborIndex] = None) -> List[int]:
    """Greedy net: every point lies within radius of a center, centers are pairwise more than radius apart."""
    index = index or NeighborIndex(cloud.quaternions)
    covered = np.zeros(cloud.size, dtype=bool)
    centers = []
    for i in range(cloud.size):
        if covered[i]:
            continue
        centers.append(i)
        covered[index.ball(cloud.quaternions[i], radius)[0]] = True
    return centers


@dataclass
class CoveringReport:
    delta: float
    upper: int
    lower: int

    @property
    def value(self) -> int:
        return self.upper

    @property
    def ratio(self) -> float:
        return self.upper / self.lower

    def to_dict(self) -> Dict[str, Any]:
        return {'delta': self.delta, 'upper': self.upper, 'lower': self.lower, 'ratio': self.ratio}


def covering_number(cloud: PointCloud, delta: float, workers: int = 1) -> CoveringReport:
    """Bounds on N(A, delta): a greedy delta-cover from above, a greedy 2*delta-packing from below.

    A delta-ball holds at most one point of a set that is more than 2*delta separated.
    """
    cloud.require_points()
    check_scale(delta)
    index = NeighborIndex(cloud.quaternions, workers)
    upper = len(greedy_centers(cloud, delta, index))
    lower = len(greedy_centers(cloud, 2 * delta, index))
    logger.debug(f"N(A, {delta}) in [{lower}, {upper}] for {cloud.size} points")
    return CoveringReport(delta=delta, upper=upper, lower=lower)


@dataclass
class DyadicLevels:
    """Level sets A_i = {2^i <= density < 2^(i+1)} of a smoothed empirical measure."""
    delta: float
    levels: Dict[int, PointCloud]
    overlap_multiplicity: int
    sandwich: Dict[str, List[float]] = field(default_factory=dict)

    @property
    def level_count(self) -> int:
        return len(self.levels)

    def reconstruct(self) -> float:
        """Total mass of sum_i 2^i 1_{A_i} against the sample weights."""
        return float(sum(2.0 ** i * cloud.total_mass for i, cloud in self.levels.items()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'delta': self.delta,
            'level_count': self.level_count,
            'log2_inverse_delta': log2(1 / self.delta),
            'overlap_multiplicity': self.overlap_multiplicity,
            'sandwich': self.sandwich,
            'records': [{'i': i, 'points': c.size, 'mass': c.total_mass} for i, c in sorted(self.levels.items())]
        }


def empirical_density(cloud: PointCloud, radius: float, index: NeighborIndex) -> np.ndarray:
    """Mass of the radius-ball around each point divided by the Haar mass of the ball."""
    return index.masses(cloud.quaternions, cloud.weights, radius) / ball_volume(radius)


def dyadic_decompose(cloud: PointCloud, delta: float, workers: int = 1) -> DyadicLevels:
    """Split samples of mu_delta by the dyadic size of their density.

    The density is read at scale 2*delta, which sees the whole of any
    delta-ball around a point of the ball. The reconstruction is compared
    with the densities at delta and 4*delta.
    """
    if cloud.size == 0:
        raise TooFewSamples("Dyadic decomposition needs at least one sample")
    check_scale(2 * delta)
    index = NeighborIndex(cloud.quaternions, workers)
    density = empirical_density(cloud, 2 * delta, index)
    level_of = np.floor(np.log2(density)).astype(int)
    levels = {int(i): cloud.subset(np.flatnonzero(level_of == i)) for i in np.unique(level_of)}

    multiplicity = max(len(np.unique(level_of[idx])) for idx in index.ball(cloud.quaternions, delta))

    reconstructed = 2.0 ** level_of
    fine = reconstructed / empirical_density(cloud, delta, index)
    sandwich = {'fine': [float(fine.min()), float(fine.max())]}
    if 4 * delta <= np.pi:
        coarse = reconstructed / empirical_density(cloud, 4 * delta, index)
        sandwich['coarse'] = [float(coarse.min()), float(coarse.max())]

    result = DyadicLevels(delta=delta, levels=levels, overlap_multiplicity=multiplicity, sandwich=sandwich)
    logger.info(f"Dyadic decomposition at delta={delta}: {result.level_count} levels, "
                f"overlap multiplicity {multiplicity}")
    return result
