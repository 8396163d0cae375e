import logging
from math import log
from typing import Any, Dict, List

import numpy as np

from ..walkdio import SubgroupModel, cluster_axes, distance_to_subgroup, rotation_axes, standard_family
from .cloud import PointCloud

logger = logging.getLogger(__name__)

COVERAGE = 0.99


def weighted_quantile(values: np.ndarray, weights: np.ndarray, level: float) -> float:
    order = np.argsort(values)
    cumulative = np.cumsum(weights[order])
    position = int(np.searchsorted(cumulative, level * cumulative[-1] - 1e-12))
    return float(values[order][min(position, len(values) - 1)])


def principal_axis(cloud: PointCloud) -> np.ndarray:
    """Dominant direction of the rotation vectors, weighted by sin^2 of the half angle."""
    v = cloud.quaternions[:, 1:]
    moment = np.einsum('n,ni,nj->ij', cloud.weights, v, v)
    _, vectors = np.linalg.eigh(moment)
    return vectors[:, -1]


class SubgroupFitter:
    def __init__(self, settings):
        self.settings = settings

    def candidates(self, cloud: PointCloud) -> List[SubgroupModel]:
        axes = []
        if np.any(np.linalg.norm(cloud.quaternions[:, 1:], axis=1) > 1e-9):
            axes.append(principal_axis(cloud))
            axes += cluster_axes(rotation_axes(cloud.quaternions), self.settings.axis_clusters,
                                 self.settings.default_seed)
        return standard_family(axes, self.settings.finite_subgroup_max_order)

    def subgroup_fit(self, cloud: PointCloud, delta: float, max_radius: float = 0.1) -> Dict[str, Any]:
        """Smallest rho such that some candidate H has rho-neighborhood holding 99% of the mass."""
        cloud.require_points()
        best, best_rho = None, np.inf
        for H in self.candidates(cloud):
            rho = weighted_quantile(distance_to_subgroup(cloud.quaternions, H), cloud.weights, COVERAGE)
            if rho < best_rho:
                best, best_rho = H, rho
        distances = distance_to_subgroup(cloud.quaternions, best)
        coverage = float(cloud.weights[distances <= best_rho].sum() / cloud.total_mass)
        fitted = best_rho <= max_radius
        if not fitted:
            logger.info(f"No subgroup neighborhood below {max_radius} covers {COVERAGE:.0%} of the cloud")
        return {
            'subgroup': best.to_dict(),
            'H': best,
            'rho': best_rho,
            'coverage': coverage,
            'delta': delta,
            # rho = delta^tau
            'tau': log(best_rho) / log(delta) if 0 < best_rho and 0 < delta < 1 else None,
            'fitted': fitted
        }
