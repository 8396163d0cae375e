import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, inf, lcm, log
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from scipy.stats import linregress

from ..algebra.linalg import Matrix, Vector, det, dot, identity, matmul, matvec, nullspace
from ..errors import BadHyperplane, BadParameter, NoExpandingPlace, SingularProduct
from ..measures.elements import is_exact
from ..walkdio import fit_decay
from .ensemble import ProductEnsemble
from .padic import PadicScalar, eigenvalue_place, padic_valuation

logger = logging.getLogger(__name__)


@dataclass
class Hyperplane:
    """W = ker(normal)."""
    normal: tuple

    @classmethod
    def from_normal(cls, normal: Sequence) -> "Hyperplane":
        normal = tuple(normal)
        if all(x == 0 for x in normal):
            raise BadHyperplane("Hyperplane normal must be nonzero")
        return cls(normal=normal)

    @classmethod
    def from_basis(cls, vectors: Sequence[Sequence], dimension: int) -> "Hyperplane":
        """Hyperplane spanned by exactly dimension - 1 independent vectors."""
        vectors = [tuple(v) for v in vectors]
        if any(len(v) != dimension for v in vectors):
            raise BadHyperplane(f"Spanning vectors must have length {dimension}")
        if all(is_exact(x) for v in vectors for x in v):
            normals = nullspace(tuple(vectors), dimension)
            if len(normals) != 1:
                raise BadHyperplane(f"Vectors span a subspace of codimension {len(normals)}",
                                    details={'codimension': len(normals)})
            return cls(normal=normals[0])
        a = np.array(vectors, dtype=float).reshape(-1, dimension)
        _, s, vt = np.linalg.svd(a)
        rank = int(np.sum(s > 1e-12 * max(1.0, s.max())))
        if rank != dimension - 1:
            raise BadHyperplane(f"Vectors span a subspace of codimension {dimension - rank}",
                                details={'codimension': dimension - rank})
        return cls(normal=tuple(float(x) for x in vt[-1]))

    @property
    def dimension(self) -> int:
        return len(self.normal)


@dataclass
class DecayReport:
    rows: List[Dict[str, Any]]
    kappa_hat: Optional[float] = None
    r_squared: Optional[float] = None
    exact: bool = False
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'records': self.rows,
            'kappa_hat': self.kappa_hat,
            'r_squared': self.r_squared,
            'exact_membership': self.exact
        }


def primitive_class(vector: Sequence[Fraction]) -> tuple:
    """Projective class of a nonzero rational vector: coprime integers, first nonzero entry positive."""
    scale = reduce(lcm, (Fraction(x).denominator for x in vector), 1)
    ints = [int(Fraction(x) * scale) for x in vector]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    return tuple(-x for x in ints) if lead < 0 else tuple(ints)


def padic_vector_valuation(vector: Sequence[Fraction], p: int) -> Union[int, float]:
    return min(padic_valuation(x, p) for x in vector)


def padic_singular_gap(m: Matrix, p: int) -> float:
    """(a_2 - a_1) log p for the elementary-divisor valuations a_1 <= a_2 of m over Q_p.

    a_1 is the least entry valuation and a_1 + a_2 the least valuation of a 2x2 minor.
    """
    d = len(m)
    a1 = min(padic_valuation(x, p) for row in m for x in row)
    minors = min(
        padic_valuation(m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0], p)
        for r0, r1 in combinations(range(d), 2) for c0, c1 in combinations(range(d), 2)
    )
    if minors == inf:
        raise SingularProduct(f"Product has rank one over Q_{p}")
    return float((minors - 2 * a1) * log(p))


class ProductAnalyzer:
    def __init__(self, settings):
        self.settings = settings

    def _exact_products(self, ens: ProductEnsemble, words: np.ndarray) -> List[Matrix]:
        cache: Dict[tuple, Matrix] = {}
        products = []
        for word in words:
            word = tuple(int(i) for i in word)
            m = identity(ens.dimension)
            for length in range(1, len(word) + 1):
                prefix = word[:length]
                if prefix in cache:
                    m = cache[prefix]
                    continue
                m = ens.matrices[word[0]] if length == 1 else matmul(m, ens.matrices[word[length - 1]])
                if len(cache) < 100000:
                    cache[prefix] = m
            products.append(m)
        return products

    def log_gaps(self, ens: ProductEnsemble, n: int, samples: int, seed: int) -> np.ndarray:
        """log(s_1 / s_2) of sampled n-fold products; p-adic singular values for p-adic ensembles."""
        words = ens.sample_words(n, samples, seed)
        if ens.place is not None:
            return np.array([padic_singular_gap(m, ens.place) for m in self._exact_products(ens, words)])

        atoms = ens.float_matrices
        products = np.broadcast_to(np.eye(ens.dimension), (samples, ens.dimension, ens.dimension)).copy()
        for step in range(n):
            products = products @ atoms[words[:, step]]
            products /= np.linalg.norm(products, axis=(1, 2), keepdims=True)
        s = np.linalg.svd(products, compute_uv=False)
        if not np.all(np.isfinite(s)) or np.any(s[:, 1] <= 0):
            raise SingularProduct("A sampled product lost rank in floating point", details={'n': n})
        return np.log(s[:, 0] / s[:, 1])

    def proximality_check(self, ens: ProductEnsemble, n: Union[int, Sequence[int]], samples: int,
                          seed: Optional[int] = None) -> Dict[str, Any]:
        """Geometric growth of the median top singular-value gap along n."""
        if ens.dimension < 2:
            raise BadParameter("Proximality needs dimension at least 2")
        seed = self.settings.default_seed if seed is None else seed
        n_values = list(range(1, n + 1)) if isinstance(n, int) else list(n)
        rows = []
        for length in n_values:
            gaps = self.log_gaps(ens, length, samples, seed)
            rows.append({'n': length, 'median_log_gap': float(np.median(gaps))})
        y = np.array([r['median_log_gap'] for r in rows])
        if len(rows) < 2 or np.allclose(y, y[0], atol=1e-9):
            slope, r_squared = 0.0, None
        else:
            fit = linregress([r['n'] for r in rows], y)
            slope, r_squared = float(fit.slope), float(fit.rvalue ** 2)
        proximal = (slope > self.settings.proximality_min_slope and r_squared is not None
                    and r_squared >= self.settings.fit_r2_threshold)
        logger.info(f"Proximality: slope {slope:.4f}, R^2 {r_squared}, proximal={proximal}")
        return {
            'place': "real" if ens.place is None else ens.place,
            'gap_ratio': float(np.exp(y[-1])),
            'slope': slope,
            'r_squared': r_squared,
            'proximal': proximal,
            'records': rows
        }

    def expanding_places(self, ens: ProductEnsemble) -> List[Dict[str, Any]]:
        """Expanding place of the eigenvalues of each rational 2x2 generator; None when they are units at every place."""
        if ens.dimension != 2:
            return []
        records = []
        for i, m in enumerate(ens.matrices):
            if not all(isinstance(x, Fraction) for row in m for x in row):
                continue
            trace, norm = m[0][0] + m[1][1], det(m)
            record = {'index': i, 'trace': trace, 'det': norm, 'place': None}
            try:
                place = eigenvalue_place(trace, norm)
            except NoExpandingPlace:
                logger.debug(f"Generator {i} has no expanding eigenvalue")
            else:
                record['place'] = place.to_dict()
                if place.kind == "padic":
                    record['det_expansion'] = PadicScalar(norm, place.prime, self.settings.padic_precision).to_dict()
            records.append(record)
        return records

    def _hits_exact(self, vectors: Sequence[Vector], hyperplane: Hyperplane, eps: float,
                    place: Optional[int]) -> np.ndarray:
        hits = []
        for vec in vectors:
            pairing = dot(hyperplane.normal, vec)
            if pairing == 0:
                hits.append(True)
            elif eps == 0:
                hits.append(False)
            elif place is None:
                ratio = abs(float(pairing)) / (np.linalg.norm(np.array(hyperplane.normal, dtype=float))
                                               * np.linalg.norm(np.array(vec, dtype=float)))
                hits.append(ratio <= eps)
            else:
                margin = padic_valuation(pairing, place) - padic_vector_valuation(hyperplane.normal, place) \
                    - padic_vector_valuation(vec, place)
                hits.append(float(place) ** -margin <= eps)
        return np.array(hits, dtype=bool)

    def hit_indicators(self, ens: ProductEnsemble, v: Sequence, hyperplane: Hyperplane, eps: float,
                       n: int, samples: int, seed: int) -> np.ndarray:
        """Whether g v lies within eps of W for sampled g = g_1 ... g_n."""
        words = ens.sample_words(n, samples, seed)
        exact = ens.exact and all(is_exact(x) for x in v) and all(is_exact(x) for x in hyperplane.normal)
        if exact and (eps == 0 or ens.place is not None):
            cache: Dict[tuple, Vector] = {(): tuple(v)}
            vectors = []
            for word in words:
                # g v = g_1 (g_2 (... (g_n v)))
                suffix = ()
                vec = tuple(v)
                for index in reversed(word):
                    suffix = (int(index),) + suffix
                    if suffix not in cache:
                        cache[suffix] = matvec(ens.matrices[int(index)], vec)
                    vec = cache[suffix]
                vectors.append(vec)
            return self._hits_exact(vectors, hyperplane, eps, ens.place)

        atoms = ens.float_matrices
        vec = np.tile(np.array([float(x) for x in v]), (samples, 1))
        for step in reversed(range(n)):
            vec = np.einsum('sij,sj->si', atoms[words[:, step]], vec)
            vec /= np.linalg.norm(vec, axis=1, keepdims=True)
        normal = np.array([float(x) for x in hyperplane.normal])
        return np.abs(vec @ normal) / np.linalg.norm(normal) <= eps

    def decay_estimate(self, ens: ProductEnsemble, v: Sequence, hyperplane: Hyperplane, eps: float,
                       n_range: Sequence[int], samples: int, seed: Optional[int] = None) -> DecayReport:
        """Monte-Carlo P(g v within eps of W) over n and the exponential rate kappa_hat."""
        self._check_inputs(ens, v, hyperplane, eps)
        seed = self.settings.default_seed if seed is None else seed
        rows = []
        for n in n_range:
            hits = self.hit_indicators(ens, v, hyperplane, eps, n, samples, seed)
            p = float(hits.mean())
            rows.append({'n': n, 'hit_probability': p, 'stderr': float(np.sqrt(p * (1 - p) / samples))})
        return self._report(rows, exact=eps == 0 and ens.exact)

    def exact_hit_probabilities(self, ens: ProductEnsemble, v: Sequence, hyperplane: Hyperplane, eps: float,
                                n_max: int) -> DecayReport:
        """Exact law of the projective class of g v, propagated one letter at a time."""
        self._check_inputs(ens, v, hyperplane, eps)
        if not (ens.exact and all(is_exact(x) for x in v)):
            raise BadParameter("Exact enumeration needs rational matrices and vector")
        if n_max > self.settings.enumeration_max_n:
            raise BadParameter(f"Exact enumeration is limited to n <= {self.settings.enumeration_max_n}",
                               details={'n_max': n_max})
        law: Dict[tuple, Fraction] = {primitive_class(v): Fraction(1)}
        rows = []
        for n in range(n_max + 1):
            if n > 0:
                nxt: Dict[tuple, Fraction] = {}
                for cls, mass in law.items():
                    for m, w in zip(ens.matrices, ens.weights):
                        image = primitive_class(matvec(m, cls))
                        nxt[image] = nxt.get(image, 0) + mass * w
                law = nxt
            classes = list(law)
            hits = self._hits_exact(classes, hyperplane, eps, ens.place)
            p = sum((law[c] for c, hit in zip(classes, hits) if hit), Fraction(0))
            rows.append({'n': n, 'hit_probability': p, 'classes': len(classes)})
            logger.debug(f"n={n}: {len(classes)} projective classes, hit probability {p}")
        return self._report(rows, exact=eps == 0)

    def _check_inputs(self, ens: ProductEnsemble, v: Sequence, hyperplane: Hyperplane, eps: float):
        if hyperplane.dimension != ens.dimension or len(v) != ens.dimension:
            raise BadHyperplane(f"Vector and hyperplane must live in dimension {ens.dimension}")
        if all(x == 0 for x in v):
            raise BadParameter("Starting vector must be nonzero")
        if eps < 0:
            raise BadParameter(f"eps must be nonnegative, got {eps}")

    def _report(self, rows: List[Dict[str, Any]], exact: bool) -> DecayReport:
        fit_rows = [r for r in rows if r['n'] > 0]
        fit = fit_decay([r['n'] for r in fit_rows], [float(r['hit_probability']) for r in fit_rows])
        report = DecayReport(rows=rows, exact=exact, r_squared=fit['r_squared'],
                             kappa_hat=None if fit['rate'] is None else max(fit['rate'], 0.0))
        if fit['r_squared'] is not None and fit['r_squared'] < self.settings.fit_r2_threshold:
            report.warnings.append(f"Decay fit has R^2 = {fit['r_squared']:.3f}")
        logger.info(f"Hyperplane decay: kappa_hat = {report.kappa_hat}, R^2 = {report.r_squared}")
        return report
