import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..measures import MeasureSpec
from .wigner import spin_label, wigner_matrices

logger = logging.getLogger(__name__)


@dataclass
class FourierSpectrum:
    """Blocks F(j) of a band-limited function or a measure, keyed by 2j."""
    blocks: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def two_j_max(self) -> int:
        return max(self.blocks) if self.blocks else 0

    def hilbert_schmidt_mass(self) -> float:
        return float(sum((two_j + 1) * np.sum(np.abs(F) ** 2) for two_j, F in self.blocks.items()))

    def evaluate(self, quaternions: np.ndarray) -> np.ndarray:
        """f(g) = sum over j of (2j+1) tr(F(j) D_j(g))."""
        q = np.atleast_2d(quaternions)
        values = np.zeros(len(q), dtype=complex)
        for two_j, F in sorted(self.blocks.items()):
            D = wigner_matrices(q, two_j)
            values += (two_j + 1) * np.einsum('ab,nba->n', F, D)
        return values

    @classmethod
    def random(cls, two_j_max: int, rng: np.random.Generator) -> "FourierSpectrum":
        blocks = {}
        for two_j in range(two_j_max + 1):
            n = two_j + 1
            blocks[two_j] = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / n
        return cls(blocks=blocks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'two_j_max': self.two_j_max,
            'blocks': [
                {'j': spin_label(two_j), 'operator_norm': float(np.linalg.norm(F, 2))}
                for two_j, F in sorted(self.blocks.items())
            ]
        }


def check_spin_allowed(measure: MeasureSpec, two_j: int):
    if measure.group == "SO3" and two_j % 2:
        raise ValueError(f"SO3 measures have no spin {spin_label(two_j)} representation")


def fourier_coefficient(measure: MeasureSpec, two_j: int) -> np.ndarray:
    """Sum of w_i D_j(g_i) over the atoms; validates the measure first."""
    measure.validate()
    check_spin_allowed(measure, two_j)
    D = wigner_matrices(measure.quaternions, two_j)
    return np.einsum('n,nab->ab', measure.float_weights, D)


def convolve(mu: MeasureSpec, nu: MeasureSpec) -> MeasureSpec:
    """mu * nu: law of gh with g ~ mu and h ~ nu independent, atoms merged by exact key."""
    if mu.group != nu.group:
        raise ValueError(f"Cannot convolve {mu.group} and {nu.group} measures")
    mass: Dict[tuple, Any] = {}
    elements = {}
    for g, w in zip(mu.atoms, mu.weights):
        for h, v in zip(nu.atoms, nu.weights):
            product = g * h
            key = product.key()
            if key not in elements:
                elements[key] = product
                mass[key] = 0
            mass[key] += w * v
    keys = list(elements)
    symmetric = mu.symmetric and nu is mu
    return MeasureSpec(group=mu.group, atoms=[elements[k] for k in keys], weights=[mass[k] for k in keys],
                       symmetric=symmetric, label=f"{mu.label}*{nu.label}".strip("*"))


def reflect(mu: MeasureSpec) -> MeasureSpec:
    return MeasureSpec(group=mu.group, atoms=[g.inverse() for g in mu.atoms], weights=list(mu.weights),
                       symmetric=mu.symmetric, label=f"{mu.label}~" if mu.label else "")


def symmetrize(mu: MeasureSpec) -> MeasureSpec:
    """mu * reflect(mu); has a spectral gap exactly when mu does."""
    result = convolve(mu, reflect(mu))
    result.symmetric = True
    return result


def convolution_power(mu: MeasureSpec, n: int) -> MeasureSpec:
    if n < 0:
        raise ValueError(f"Convolution power must be nonnegative, got {n}")
    result = MeasureSpec.dirac(mu.group)
    for _ in range(n):
        result = convolve(result, mu)
    result.symmetric = mu.symmetric or n == 0
    return result


def spectral_bound_from_l2(l2_norm: float, smoothing_defect: float, two_j: int, n: int) -> Dict[str, Any]:
    """Operator-norm bound on mu^(j)^n from ||(mu^n)_delta||_2.

    Holds when ||P_delta(j) - Id|| <= 1/2: then
    ||mu^(j)^n|| <= 2 ||(mu^n)_delta||_2 / sqrt(2j+1).
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    bound = 2.0 * l2_norm / np.sqrt(two_j + 1)
    radius_bound: Optional[float] = bound ** (1.0 / n) if bound < 1 else None
    return {
        'j': spin_label(two_j),
        'n': n,
        'operator_norm_bound': float(bound),
        'spectral_radius_bound': radius_bound,
        'smoothing_defect': float(smoothing_defect),
        'valid': bool(smoothing_defect <= 0.5)
    }
