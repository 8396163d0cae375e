import logging
from fractions import Fraction
from math import sqrt
from typing import Any, Dict, List

from ..errors import BadParameter

logger = logging.getLogger(__name__)


def free_group_return_probabilities(m: int, n_max: int) -> List[Fraction]:
    """Exact p_{2n}(e), n = 1..n_max, for the simple random walk on the free group with m generators.

    The walk is projected to the word length: from 0 it always moves to 1,
    otherwise it moves out with probability (2m-1)/2m and in with 1/2m.
    """
    if m < 1 or n_max < 1:
        raise BadParameter(f"Need m >= 1 and n_max >= 1, got m={m}, n_max={n_max}")
    out = Fraction(2 * m - 1, 2 * m)
    back = Fraction(1, 2 * m)
    law = {0: Fraction(1)}
    returns = []
    for step in range(1, 2 * n_max + 1):
        nxt: Dict[int, Fraction] = {}
        for length, p in law.items():
            if length == 0:
                nxt[1] = nxt.get(1, 0) + p
                continue
            nxt[length + 1] = nxt.get(length + 1, 0) + p * out
            nxt[length - 1] = nxt.get(length - 1, 0) + p * back
        law = nxt
        if step % 2 == 0:
            returns.append(law.get(0, Fraction(0)))
    return returns


def kesten_baseline(m: int, n_max: int) -> Dict[str, Any]:
    """Kesten's spectral radius sqrt(2m-1)/m against exact return probabilities."""
    returns = free_group_return_probabilities(m, n_max)
    theory = sqrt(2 * m - 1) / m

    root_test = max(float(p) ** (1.0 / (2 * n)) for n, p in enumerate(returns, start=1))

    # p_{2n} ~ C rho^{2n} n^{-beta}
    beta = 0.5 if m == 1 else 1.5
    n = len(returns)
    if n >= 2:
        ratio = float(returns[-1] / returns[-2])
        empirical = sqrt(ratio * (n / (n - 1)) ** beta)
    else:
        empirical = root_test

    logger.info(f"Kesten baseline m={m}: theory {theory:.6f}, empirical {empirical:.6f}, "
                f"root test {root_test:.6f}")
    return {
        'generators': m,
        'atoms': 2 * m,
        'n_max': n_max,
        'theory': theory,
        'empirical': empirical,
        'root_test': root_test,
        'relative_error': abs(empirical - theory) / theory,
        'records': [{'n': k, 'return_probability': str(p)} for k, p in enumerate(returns, start=1)]
    }
