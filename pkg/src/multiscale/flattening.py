import logging
from math import log, sqrt
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.stats import linregress

from ..errors import TooFewSamples
from ..measures import MeasureSpec, multiply_quaternion_arrays
from ..walkdio import WalkSampler
from .cloud import NeighborIndex, PointCloud, ball_volume, check_scale

logger = logging.getLogger(__name__)


def l2_norm(cloud: PointCloud, delta: float, workers: int = 1) -> float:
    """Collision estimate of ||nu_delta||_2 for the law nu the points are drawn from.

    Distinct pairs within distance delta are counted and normalized by the
    Haar mass of the delta-ball, so Haar measure has norm 1.
    """
    if cloud.size < 2:
        raise TooFewSamples("An L2 estimate needs at least two samples")
    check_scale(delta)
    w = cloud.weights / cloud.total_mass
    index = NeighborIndex(cloud.quaternions, workers)
    if cloud.uniform:
        collisions = (index.counts(cloud.quaternions, delta).sum() - cloud.size) / cloud.size ** 2
    else:
        collisions = float(w @ index.masses(cloud.quaternions, w, delta)) - float(w @ w)
    collisions /= 1.0 - float(w @ w)
    return sqrt(max(collisions, 0.0) / ball_volume(delta))


def resolution_floor(delta: float) -> float:
    return (1.0 / delta) ** 1.5


class FlatteningAnalyzer:
    def __init__(self, settings):
        self.settings = settings
        self.sampler = WalkSampler(settings)

    def _pair_clouds(self, measure: MeasureSpec, n: int, samples: int, seed: int):
        """Independent samples X, Y of mu^{*n} and the products XY, a sample of mu^{*2n}."""
        walk = self.sampler.sample_walk(measure, n, 2 * samples, seed)
        x, y = walk.quaternions[:samples], walk.quaternions[samples:]
        return PointCloud(x), PointCloud(multiply_quaternion_arrays(x, y))

    def flattening_ratio(self, measure: MeasureSpec, delta: float, n: int, samples: int,
                         seed: Optional[int] = None) -> Dict[str, Any]:
        """Estimate of ||nu_delta * nu_delta||_2 / ||nu_delta||_2 for nu = mu^{*n}.

        Both norms are collision estimates on sampled clouds. The convolution norm is
        estimated from the products XY of independent samples, which are draws from
        mu^{*2n}; it is never evaluated directly.
        """
        seed = self.settings.default_seed if seed is None else seed
        workers = self.settings.spectra_threads
        single, double = self._pair_clouds(measure, n, samples, seed)
        norm = l2_norm(single, delta, workers)
        convolved = l2_norm(double, delta, workers)
        result = {
            'delta': delta,
            'n': n,
            'samples': samples,
            'l2_norm': norm,
            'l2_convolved': convolved,
            'ratio': convolved / norm if norm > 0 else None,
            'estimator': "collision",
            'under_resolved': samples < resolution_floor(delta),
            'warnings': []
        }
        if result['under_resolved']:
            message = f"{samples} samples is below the resolution floor {resolution_floor(delta):.0f} at delta={delta}"
            result['warnings'].append(message)
            logger.warning(message)
        logger.debug(f"Flattening at delta={delta}, n={n}: ratio {result['ratio']}")
        return result

    def flattening_sweep(self, measure: MeasureSpec, deltas: Sequence[float], n: int, samples: int,
                         seed: Optional[int] = None) -> Dict[str, Any]:
        """Ratios over a delta sweep and the exponent eps_hat in ratio ~ delta^eps."""
        rows = [self.flattening_ratio(measure, delta, n, samples, seed) for delta in deltas]
        usable = [r for r in rows if r['ratio'] and r['ratio'] > 0]
        epsilon, r_squared = None, None
        if len({r['delta'] for r in usable}) >= 2:
            fit = linregress([log(r['delta']) for r in usable], [log(r['ratio']) for r in usable])
            epsilon, r_squared = float(fit.slope), float(fit.rvalue ** 2)
        warnings = [w for r in rows for w in r.pop('warnings')]
        logger.info(f"Flattening sweep over {len(rows)} scales: eps_hat = {epsilon}")
        return {'records': rows, 'epsilon_hat': epsilon, 'r_squared': r_squared, 'warnings': warnings}

    def iterated_flattening(self, measure: MeasureSpec, delta: float, n0: int, alpha: float,
                            max_rounds: int, samples: int, seed: Optional[int] = None) -> Dict[str, Any]:
        """Square nu = mu^{*n0} until ||nu_delta||_2 <= delta^-alpha.

        Round k works with mu^{*(n0 * 2^k)}, sampled directly.
        """
        seed = self.settings.default_seed if seed is None else seed
        target = delta ** -alpha
        rows: List[Dict[str, Any]] = []
        length = n0
        for round_index in range(max_rounds + 1):
            walk = self.sampler.sample_walk(measure, length, samples, seed)
            norm = l2_norm(PointCloud(walk.quaternions), delta, self.settings.spectra_threads)
            rows.append({'round': round_index, 'n': length, 'l2_norm': norm})
            if norm <= target:
                break
            length *= 2
        reached = rows[-1]['l2_norm'] <= target
        if not reached:
            logger.warning(f"No flattening below {target:.3g} after {max_rounds} rounds")
        return {
            'delta': delta,
            'alpha': alpha,
            'target': target,
            'rounds': rows[-1]['round'],
            'reached': reached,
            'records': rows
        }
