import logging
from dataclasses import dataclass, field
from math import exp, log
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.cluster.vq import kmeans2
from scipy.stats import linregress

from ..errors import BadParameter, UndecidableMembership
from ..measures import GroupElement, MeasureSpec, multiply_quaternion_arrays
from .sampler import WalkSample, WalkSampler, enumerate_walk
from .subgroups import (
    DISTANCE_FLOOR, SubgroupModel, contains, distance_to_subgroup, haar_neighborhood_mass,
    standard_family
)

logger = logging.getLogger(__name__)

AXIS_EPSILON = 1e-9


@dataclass
class DioProfile:
    c1: float
    rows: List[Dict[str, Any]]
    c2_hat: Optional[float] = None
    r_squared: Optional[float] = None
    fit_window: List[int] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'C1': self.c1,
            'c2_hat': self.c2_hat,
            'r_squared': self.r_squared,
            'fit_window': self.fit_window,
            'records': self.rows
        }


def rotation_axes(quaternions: np.ndarray) -> np.ndarray:
    q = np.atleast_2d(quaternions)
    v = q[:, 1:]
    norms = np.linalg.norm(v, axis=1)
    keep = norms > AXIS_EPSILON
    return v[keep] / norms[keep, None]


def _dedupe_axes(axes: Sequence[np.ndarray]) -> List[np.ndarray]:
    unique: List[np.ndarray] = []
    for u in axes:
        if all(abs(abs(float(np.dot(u, w))) - 1.0) > 1e-10 for w in unique):
            unique.append(u)
    return unique


def cluster_axes(axes: np.ndarray, clusters: int, seed: int) -> List[np.ndarray]:
    """Sign-free k-means on axes through their projectors u u^T."""
    if len(axes) == 0:
        return []
    upper = np.triu_indices(3)
    projectors = np.einsum('ni,nj->nij', axes, axes)[:, upper[0], upper[1]]
    _, first = np.unique(np.round(projectors, 9), axis=0, return_index=True)
    if len(first) <= clusters:
        return [axes[i] for i in sorted(first)]
    _, labels = kmeans2(projectors, clusters, minit='++', seed=seed)
    centers = []
    for k in range(clusters):
        members = axes[labels == k]
        if len(members) == 0:
            continue
        # principal direction of the mean projector
        values, vectors = np.linalg.eigh(np.einsum('ni,nj->ij', members, members) / len(members))
        centers.append(vectors[:, -1])
    return centers


def fit_decay(ns: Sequence[int], probabilities: Sequence[float]) -> Dict[str, Any]:
    """Fit log p = intercept - rate * n over the rows with p > 0."""
    points = [(n, p) for n, p in zip(ns, probabilities) if p > 0]
    if len(points) < 2 or len({n for n, _ in points}) < 2:
        return {'rate': None, 'r_squared': None, 'window': [n for n, _ in points]}
    x = np.array([n for n, _ in points], dtype=float)
    y = np.log([p for _, p in points])
    if np.allclose(y, y[0]):
        return {'rate': 0.0, 'r_squared': 1.0, 'window': x.astype(int).tolist()}
    fit = linregress(x, y)
    return {'rate': float(-fit.slope), 'r_squared': float(fit.rvalue ** 2),
            'window': x.astype(int).tolist()}


def diophantine_constants(spectral_radius: float, group_dim: int = 3, subgroup_dim: int = 1) -> Dict[str, float]:
    """Constants of the almost-Diophantine property implied by a spectral gap.

    With c = -log RS, mu^{*n}(H^(e^{-C1 n})) <= e^{-c2 n} for C1 = 2c/(d-p), c2 = c.
    """
    if not 0 < spectral_radius < 1:
        raise BadParameter(f"Spectral radius must lie in (0, 1), got {spectral_radius}")
    if group_dim <= subgroup_dim:
        raise BadParameter(f"Subgroup dimension {subgroup_dim} must be below {group_dim}")
    c = -log(spectral_radius)
    codim = group_dim - subgroup_dim
    return {
        'c': c,
        'C1': 2 * c / codim,
        'c2': c,
        'indicator_exponent': codim / 2
    }


class DiophantineProfiler:
    def __init__(self, settings):
        self.settings = settings
        self.sampler = WalkSampler(settings)

    def subgroup_family(self, measure: MeasureSpec, walk: Optional[WalkSample] = None,
                        extra: Sequence[SubgroupModel] = ()) -> List[SubgroupModel]:
        axes = list(rotation_axes(measure.quaternions))
        if walk is not None and walk.n > 0:
            axes += cluster_axes(rotation_axes(walk.quaternions), self.settings.axis_clusters, walk.seed)
        family = standard_family(_dedupe_axes(axes), self.settings.finite_subgroup_max_order)
        return family + list(extra)

    def diophantine_profile(self, measure: MeasureSpec, c1: float, n_range: Sequence[int], samples: int,
                            seed: Optional[int] = None,
                            extra_subgroups: Sequence[SubgroupModel] = ()) -> DioProfile:
        """Worst empirical mass of e^{-C1 n}-neighborhoods of subgroups, per n."""
        if c1 <= 0:
            raise BadParameter(f"C1 must be positive, got {c1}", details={'C1': c1})
        seed = self.settings.default_seed if seed is None else seed
        rows = []
        for n in n_range:
            walk = self.sampler.sample_walk(measure, n, samples, seed)
            delta = exp(-c1 * n)
            family = self.subgroup_family(measure, walk, extra_subgroups)
            worst, worst_h = -1.0, None
            for H in family:
                probability = float(np.mean(distance_to_subgroup(walk.quaternions, H) <= delta + DISTANCE_FLOOR))
                if probability > worst:
                    worst, worst_h = probability, H
            row = {
                'n': n,
                'delta': delta,
                'worst_probability': worst,
                'worst_subgroup': worst_h.label,
                'family_size': len(family)
            }
            try:
                row['haar_mass'] = haar_neighborhood_mass(worst_h, delta)
            except BadParameter:
                row['haar_mass'] = None
            rows.append(row)
            logger.debug(f"n={n}: worst probability {worst:.4f} against {worst_h.label}")

        fit = fit_decay([r['n'] for r in rows], [r['worst_probability'] for r in rows])
        profile = DioProfile(c1=c1, rows=rows, c2_hat=fit['rate'], r_squared=fit['r_squared'],
                             fit_window=fit['window'])
        if fit['r_squared'] is not None and fit['r_squared'] < self.settings.fit_r2_threshold:
            profile.warnings.append(f"Decay fit has R^2 = {fit['r_squared']:.3f}")
        logger.info(f"Diophantine profile over {len(rows)} lengths: c2_hat = {profile.c2_hat}")
        return profile

    def subgroup_hit_probability(self, measure: MeasureSpec, H: SubgroupModel, n: int, samples: int,
                                 seed: Optional[int] = None) -> float:
        """Monte-Carlo estimate of mu^{*n}(H) with exact membership tests."""
        if not measure.exact:
            raise UndecidableMembership("Measure has float entries; membership in H is undecidable")
        if n == 0:
            return 1.0 if contains(GroupElement.identity(measure.group), H) else 0.0
        walk = self.sampler.sample_walk(measure, n, samples, seed)
        elements = self.sampler.exact_products(measure, walk.words)
        hits = sum(1 for g in elements if contains(g, H))
        return hits / samples

    def hit_decay(self, measure: MeasureSpec, H: SubgroupModel, n_range: Sequence[int], samples: int,
                  seed: Optional[int] = None) -> Dict[str, Any]:
        rows = [{'n': n, 'hit_probability': self.subgroup_hit_probability(measure, H, n, samples, seed)}
                for n in n_range]
        fit = fit_decay([r['n'] for r in rows], [r['hit_probability'] for r in rows])
        return {'subgroup': H.to_dict(), 'records': rows, 'kappa_hat': fit['rate'],
                'r_squared': fit['r_squared']}

    def coset_bound_check(self, measure: MeasureSpec, H: SubgroupModel, delta: float, n: int) -> Dict[str, Any]:
        """Check sup_x m(x H^(d))^2 <= P(a^-1 b in H^(2d)) and m*m(H^(d)) <= sup_x m(x H^(d)) for m = mu^{*n}."""
        law = enumerate_walk(measure, n, self.settings.enumeration_max_n)
        keys = list(law.elements)
        q = np.array([law.elements[k].float_quaternion for k in keys])
        w = np.array([float(law.mass[k]) for k in keys])
        conj = q * np.array([1.0, -1.0, -1.0, -1.0])

        # relative[i, j] = a_i^-1 b_j
        relative = multiply_quaternion_arrays(conj[:, None, :], q[None, :, :])
        d = distance_to_subgroup(relative.reshape(-1, 4), H).reshape(len(keys), len(keys))

        pair_mass = float(w @ (d <= 2 * delta + DISTANCE_FLOOR).astype(float) @ w)

        # conv[i, j] = a_i b_j, so row i holds the coset a_i^-1 H
        conv = multiply_quaternion_arrays(q[:, None, :], q[None, :, :])
        d_conv = distance_to_subgroup(conv.reshape(-1, 4), H).reshape(len(keys), len(keys))

        # x ranges over the support and its inverses
        coset_masses = (d <= delta).astype(float) @ w
        inverse_coset_masses = (d_conv <= delta).astype(float) @ w
        sup_coset = float(max(np.max(coset_masses), np.max(inverse_coset_masses)))
        convolution_mass = float(w @ inverse_coset_masses)

        first = sup_coset ** 2 <= pair_mass + 1e-12
        second = convolution_mass <= sup_coset + 1e-12
        if not (first and second):
            logger.warning(f"Coset bound violated for {H.label} at n={n}, delta={delta}")
        return {
            'n': n,
            'delta': delta,
            'support_size': len(keys),
            'sup_coset_mass': sup_coset,
            'pair_mass_2delta': pair_mass,
            'convolution_mass': convolution_mass,
            'squared_bound_holds': first,
            'convolution_bound_holds': second
        }
