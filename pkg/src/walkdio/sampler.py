import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import BadParameter, HeightOverflow
from ..measures import GroupElement, MeasureSpec, canonicalize_quaternions, multiply_quaternion_arrays

logger = logging.getLogger(__name__)


def walk_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for one (seed, stream...) pair, independent of call order."""
    return np.random.default_rng([seed, *stream])


@dataclass
class WalkSample:
    """Endpoints of independent words of length n drawn from mu."""
    group: str
    n: int
    seed: int
    words: np.ndarray
    quaternions: np.ndarray
    exact_elements: Optional[List[GroupElement]] = None
    height_overflow: bool = False
    warnings: List[str] = field(default_factory=list)

    @property
    def samples(self) -> int:
        return len(self.quaternions)

    def keys(self) -> List[tuple]:
        if self.exact_elements is not None:
            return [g.key() for g in self.exact_elements]
        q = self.quaternions
        if self.group == "SO3":
            q = canonicalize_quaternions(q)
        return [tuple(np.round(row, 12)) for row in q]

    def empirical_law(self) -> Dict[tuple, float]:
        counts = Counter(self.keys())
        return {key: count / self.samples for key, count in counts.items()}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'group': self.group,
            'n': self.n,
            'seed': self.seed,
            'samples': self.samples,
            'exact': self.exact_elements is not None,
            'height_overflow': self.height_overflow
        }


class WalkSampler:
    def __init__(self, settings):
        self.settings = settings

    def sample_walk(self, measure: MeasureSpec, n: int, samples: int, seed: Optional[int] = None,
                    keep_exact: bool = False) -> WalkSample:
        """Draw words w = g_1 ... g_n with i.i.d. letters from mu.

        Float products are always formed. With keep_exact, exact products are
        kept until an entry exceeds the height budget; then the sample falls
        back to floats and records the overflow.
        """
        if n < 0 or samples < 1:
            raise BadParameter(f"Need n >= 0 and samples >= 1, got n={n}, samples={samples}")
        measure.validate()
        seed = self.settings.default_seed if seed is None else seed
        rng = walk_rng(seed, n)
        words = rng.choice(measure.size, size=(samples, n), p=measure.float_weights)

        atoms = measure.quaternions
        q = np.tile([1.0, 0.0, 0.0, 0.0], (samples, 1))
        for step in range(n):
            q = multiply_quaternion_arrays(q, atoms[words[:, step]])
        q = q / np.linalg.norm(q, axis=1, keepdims=True)

        result = WalkSample(group=measure.group, n=n, seed=seed, words=words, quaternions=q)
        if keep_exact and measure.exact:
            try:
                result.exact_elements = self.exact_products(measure, words)
            except HeightOverflow as e:
                result.height_overflow = True
                result.warnings.append(e.message)
                logger.warning(f"Falling back to float products: {e.message}")
        logger.debug(f"Sampled {samples} words of length {n} (seed {seed})")
        return result

    def exact_products(self, measure: MeasureSpec, words: np.ndarray) -> List[GroupElement]:
        budget = self.settings.exact_height_bits
        cache: Dict[tuple, GroupElement] = {(): GroupElement.identity(measure.group)}
        products = []
        for word in words:
            word = tuple(int(i) for i in word)
            prefix = ()
            element = cache[()]
            # extend along the longest cached prefix
            for length in range(len(word), 0, -1):
                if word[:length] in cache:
                    prefix = word[:length]
                    element = cache[prefix]
                    break
            for index in word[len(prefix):]:
                element = element * measure.atoms[index]
                prefix = prefix + (index,)
                bits = element.height_bits()
                if bits > budget:
                    raise HeightOverflow(f"Exact entries reached {bits} bits (budget {budget})",
                                         details={'bits': bits, 'budget': budget, 'length': len(prefix)})
                if len(cache) < 200000:
                    cache[prefix] = element
            products.append(element)
        return products


@dataclass
class ExactLaw:
    """Exact law of a walk: support elements and their masses, keyed by exact element key."""
    group: str
    elements: Dict[tuple, GroupElement]
    mass: Dict[tuple, Any]

    @property
    def size(self) -> int:
        return len(self.elements)

    def mass_of(self, element: GroupElement) -> Any:
        return self.mass.get(element.key(), 0)

    def identity_mass(self) -> Any:
        return self.mass_of(GroupElement.identity(self.group))

    def to_measure(self, label: str = "") -> MeasureSpec:
        keys = list(self.elements)
        return MeasureSpec(group=self.group, atoms=[self.elements[k] for k in keys],
                           weights=[self.mass[k] for k in keys], label=label)


def step_law(law: ExactLaw, measure: MeasureSpec) -> ExactLaw:
    elements: Dict[tuple, GroupElement] = {}
    mass: Dict[tuple, Any] = {}
    for key, g in law.elements.items():
        p = law.mass[key]
        for atom, w in zip(measure.atoms, measure.weights):
            product = g * atom
            k = product.key()
            if k not in elements:
                elements[k] = product
                mass[k] = 0
            mass[k] += p * w
    return ExactLaw(group=law.group, elements=elements, mass=mass)


def enumerate_walk(measure: MeasureSpec, n: int, max_n: int = 12) -> ExactLaw:
    """Law of mu^{*n} by propagating masses through deduplicated products."""
    if n < 0:
        raise BadParameter(f"n must be nonnegative, got {n}")
    if n > max_n:
        raise BadParameter(f"Exact enumeration is limited to n <= {max_n}", details={'n': n})
    measure.validate()
    identity = GroupElement.identity(measure.group)
    law = ExactLaw(group=measure.group, elements={identity.key(): identity}, mass={identity.key(): 1})
    for _ in range(n):
        law = step_law(law, measure)
    logger.debug(f"Enumerated mu^{n}: support of size {law.size}")
    return law


def return_profile(measure: MeasureSpec, n_max: int, max_n: int = 12) -> List[Any]:
    """Return probabilities p_{2n}(e) for n = 1..n_max."""
    if 2 * n_max > max_n:
        raise BadParameter(f"Return profile needs 2*n_max <= {max_n}", details={'n_max': n_max})
    measure.validate()
    identity = GroupElement.identity(measure.group)
    law = ExactLaw(group=measure.group, elements={identity.key(): identity}, mass={identity.key(): 1})
    profile = []
    for step in range(1, 2 * n_max + 1):
        law = step_law(law, measure)
        if step % 2 == 0:
            profile.append(law.identity_mass())
    return profile