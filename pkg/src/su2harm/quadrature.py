import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..measures import GroupElement, MeasureSpec, quaternion_to_rotation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HaarQuadrature:
    """Product rule on SU(2) in ZYZ Euler angles.

    Integrates every matrix coefficient of spin <= degree exactly, so products
    of two coefficients with j1 + j2 <= degree are exact as well.
    """
    degree: int
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def quaternions(self) -> np.ndarray:
        return euler_to_quaternion(self.alpha, self.beta, self.gamma)

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.degree + 1, self.degree // 2 + 1, 2 * self.degree + 2)


def euler_to_quaternion(alpha, beta, gamma) -> np.ndarray:
    """q = qz(alpha) qy(beta) qz(gamma) as (N, 4) rows."""
    alpha, beta, gamma = (np.atleast_1d(np.asarray(x, dtype=float)) for x in (alpha, beta, gamma))
    cb, sb = np.cos(beta / 2), np.sin(beta / 2)
    half_sum = (alpha + gamma) / 2
    half_diff = (alpha - gamma) / 2
    return np.stack([
        cb * np.cos(half_sum),
        -sb * np.sin(half_diff),
        sb * np.cos(half_diff),
        cb * np.sin(half_sum),
    ], axis=-1)


def haar_quadrature(degree: int) -> HaarQuadrature:
    """Uniform nodes in alpha over [0, 2pi) and gamma over [0, 4pi), Gauss-Legendre in cos(beta)."""
    if degree < 0:
        raise ValueError(f"Quadrature degree must be nonnegative, got {degree}")
    n_alpha = degree + 1
    n_beta = degree // 2 + 1
    n_gamma = 2 * degree + 2

    nodes, gl_weights = leggauss(n_beta)
    alpha = 2 * np.pi * np.arange(n_alpha) / n_alpha
    beta = np.arccos(nodes)
    gamma = 4 * np.pi * np.arange(n_gamma) / n_gamma

    A, B, G = np.meshgrid(alpha, beta, gamma, indexing='ij')
    W = np.broadcast_to((gl_weights / 2)[None, :, None], A.shape) / (n_alpha * n_gamma)

    logger.debug(f"Haar quadrature of degree {degree} with {A.size} nodes")
    return HaarQuadrature(degree=degree, alpha=A.ravel(), beta=B.ravel(), gamma=G.ravel(),
                          weights=np.ascontiguousarray(W).ravel())


def haar_measure(degree: int, group: str = "SU2") -> MeasureSpec:
    """Float-weighted MeasureSpec whose Fourier coefficients vanish for 0 < j <= degree."""
    rule = haar_quadrature(degree)
    atoms = []
    for q in rule.quaternions:
        if group == "SU2":
            atoms.append(GroupElement(group="SU2", quaternion=tuple(float(x) for x in q)))
        else:
            atoms.append(GroupElement(group="SO3", matrix=quaternion_to_rotation(q)))
    measure = MeasureSpec(group=group, atoms=atoms, weights=list(rule.weights),
                          symmetric=False, label=f"haar-quadrature-{degree}")
    return measure.validate()
