import logging
from typing import Any, Dict

from ..errors import ClassificationFailure
from .types import Classification, Fundamental, RootSystem, SumDual
from .weyl import dual_index

logger = logging.getLogger(__name__)


def classify_highest_root(rs: RootSystem) -> Classification:
    """Decide whether the highest root is a fundamental weight or omega + omega*."""
    coords = rs.fw_coords(rs.highest_root)
    support = [i for i, c in enumerate(coords) if c != 0]

    if len(support) == 1 and coords[support[0]] == 1:
        i = support[0]
        result = Fundamental(index=i, omega=rs.weight(rs.fundamental_weights[i]))
    elif len(support) == 2 and all(coords[i] == 1 for i in support):
        i, j = support
        if dual_index(rs, i) != j:
            raise ClassificationFailure(
                f"{rs.name}: highest root is omega_{i + 1} + omega_{j + 1} but they are not dual",
                details={'fw_coords': [str(c) for c in coords]})
        result = SumDual(index=i, dual_index=j,
                         omega=rs.weight(rs.fundamental_weights[i]),
                         omega_dual=rs.weight(rs.fundamental_weights[j]))
    elif len(support) == 1 and coords[support[0]] == 2:
        i = support[0]
        if dual_index(rs, i) != i:
            raise ClassificationFailure(f"{rs.name}: highest root is 2 omega_{i + 1} with omega_{i + 1} not self-dual")
        omega = rs.weight(rs.fundamental_weights[i])
        result = SumDual(index=i, dual_index=i, omega=omega, omega_dual=omega)
    else:
        raise ClassificationFailure(
            f"{rs.name}: highest root has fundamental coordinates {[str(c) for c in coords]}",
            details={'fw_coords': [str(c) for c in coords]})

    logger.debug(f"{rs.name}: highest root classified as {result.kind}")
    return result


def classification_record(rs: RootSystem) -> Dict[str, Any]:
    result = classify_highest_root(rs)
    record = {'type': rs.name, 'family': rs.spec.family, 'rank': rs.rank}
    record.update(result.to_dict())
    record['distinct_dual'] = isinstance(result, SumDual) and not result.self_dual
    return record
