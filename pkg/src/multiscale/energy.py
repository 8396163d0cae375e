import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from ..errors import BudgetExceeded
from ..measures import multiply_quaternion_arrays
from .cloud import NeighborIndex, PointCloud, check_scale
from .covering import greedy_centers

logger = logging.getLogger(__name__)


@dataclass
class EnergyReport:
    delta: float
    n_a: int
    n_b: int
    energy: int

    @property
    def normalized(self) -> float:
        return self.energy / (self.n_a ** 1.5 * self.n_b ** 1.5)

    @property
    def bounds_hold(self) -> bool:
        return self.n_a * self.n_b <= self.energy <= (self.n_a * self.n_b) ** 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            'delta': self.delta,
            'N_A': self.n_a,
            'N_B': self.n_b,
            'energy': self.energy,
            'normalized': self.normalized,
            'bounds_hold': self.bounds_hold
        }


class EnergyCounter:
    def __init__(self, settings):
        self.settings = settings

    def multiplicative_energy(self, a: PointCloud, b: PointCloud, delta: float) -> EnergyReport:
        """Count quadruples (a, b, a', b') of delta-separated representatives with d(ab, a'b') <= delta."""
        budget = self.settings.energy_budget
        for name, cloud in (("A", a), ("B", b)):
            cloud.require_points()
            if cloud.size > budget:
                raise BudgetExceeded(f"|{name}| = {cloud.size} exceeds the energy budget {budget}",
                                     details={'size': cloud.size, 'budget': budget})
        check_scale(delta)
        workers = self.settings.spectra_threads
        reps_a = a.quaternions[greedy_centers(a, delta, NeighborIndex(a.quaternions, workers))]
        reps_b = b.quaternions[greedy_centers(b, delta, NeighborIndex(b.quaternions, workers))]

        products = multiply_quaternion_arrays(reps_a[:, None, :], reps_b[None, :, :]).reshape(-1, 4)
        index = NeighborIndex(products, workers)
        energy = int(index.counts(products, delta).sum())

        report = EnergyReport(delta=delta, n_a=len(reps_a), n_b=len(reps_b), energy=energy)
        logger.info(f"E_delta(A, B) = {energy} at delta={delta} (N_A={report.n_a}, N_B={report.n_b})")
        return report
