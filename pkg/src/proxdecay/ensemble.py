import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from ..algebra.linalg import Matrix, det
from ..algebra.quadratic import format_rational, parse_rational
from ..errors import InvalidMeasureFile, ParseError, SingularProduct
from ..measures.elements import is_exact
from ..walkdio import walk_rng
from .padic import check_prime

logger = logging.getLogger(__name__)


@dataclass
class ProductEnsemble:
    """Finitely supported law on GL(d) over R (place None) or Q_p (place p)."""
    matrices: List[Matrix]
    weights: List[Fraction]
    place: Optional[int] = None
    label: str = ""
    _float: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("Ensemble needs at least one matrix")
        if len(self.matrices) != len(self.weights):
            raise ValueError(f"{len(self.matrices)} matrices but {len(self.weights)} weights")
        self.matrices = [tuple(tuple(row) for row in m) for m in self.matrices]
        d = len(self.matrices[0])
        for m in self.matrices:
            if len(m) != d or any(len(row) != d for row in m):
                raise ValueError(f"All matrices must be {d}x{d}")
        if any(w <= 0 for w in self.weights) or abs(float(sum(self.weights)) - 1.0) > 1e-12:
            raise ValueError("Weights must be positive and sum to 1")
        if self.place is not None:
            check_prime(self.place)
            if not self.exact:
                raise ValueError(f"A {self.place}-adic ensemble needs rational entries")
        for i, m in enumerate(self.matrices):
            singular = det(m) == 0 if self._matrix_exact(m) else abs(np.linalg.det(np.array(m, dtype=float))) < 1e-14
            if singular:
                raise SingularProduct(f"Matrix {i} is not invertible", details={'index': i})

    @staticmethod
    def _matrix_exact(m: Matrix) -> bool:
        return all(is_exact(x) for row in m for x in row)

    @property
    def dimension(self) -> int:
        return len(self.matrices[0])

    @property
    def size(self) -> int:
        return len(self.matrices)

    @property
    def exact(self) -> bool:
        return all(self._matrix_exact(m) for m in self.matrices) and all(isinstance(w, Fraction) for w in self.weights)

    @property
    def float_matrices(self) -> np.ndarray:
        if self._float is None:
            self._float = np.array([[[float(x) for x in row] for row in m] for m in self.matrices])
        return self._float

    @property
    def float_weights(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])

    def sample_words(self, n: int, samples: int, seed: int) -> np.ndarray:
        rng = walk_rng(seed, n)
        return rng.choice(self.size, size=(samples, n), p=self.float_weights)

    @classmethod
    def uniform(cls, matrices: Sequence[Sequence[Sequence]], place: Optional[int] = None,
                label: str = "") -> "ProductEnsemble":
        return cls(matrices=list(matrices), weights=[Fraction(1, len(matrices))] * len(matrices),
                   place=place, label=label)

    def to_dict(self) -> Dict[str, Any]:
        def fmt(x):
            return format_rational(x) if is_exact(x) else float(x)
        return {
            'place': "real" if self.place is None else self.place,
            'dimension': self.dimension,
            'matrices': [[[fmt(x) for x in row] for row in m] for m in self.matrices],
            'weights': [fmt(w) for w in self.weights]
        }


def _entry(value: Any, pointer: str):
    if isinstance(value, float):
        return value
    try:
        return parse_rational(value)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ParseError(f"Invalid entry at {pointer}: {e}", details={'pointer': pointer})


def parse_ensemble(data: Dict[str, Any]) -> ProductEnsemble:
    """Build a ProductEnsemble from {"place": "real"|p, "matrices": [...], "weights": [...]}."""
    if not isinstance(data, dict):
        raise ParseError("Ensemble document must be an object", details={'pointer': ""})
    place = data.get('place', "real")
    if place == "real":
        place = None
    elif not isinstance(place, int) or isinstance(place, bool):
        raise ParseError(f"place must be \"real\" or a prime, got {place!r}", details={'pointer': "/place"})
    matrices_data = data.get('matrices')
    if not isinstance(matrices_data, list) or not matrices_data:
        raise ParseError("Ensemble needs a nonempty matrices list", details={'pointer': "/matrices"})
    matrices = []
    for i, rows in enumerate(matrices_data):
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise ParseError(f"/matrices/{i} must be a list of rows", details={'pointer': f"/matrices/{i}"})
        matrices.append(tuple(tuple(_entry(x, f"/matrices/{i}/{r}/{c}") for c, x in enumerate(row))
                              for r, row in enumerate(rows)))
    weights_data = data.get('weights')
    if weights_data is None:
        weights = [Fraction(1, len(matrices))] * len(matrices)
    elif not isinstance(weights_data, list):
        raise ParseError("weights must be a list", details={'pointer': "/weights"})
    else:
        weights = [_entry(w, f"/weights/{i}") for i, w in enumerate(weights_data)]
    try:
        return ProductEnsemble(matrices=matrices, weights=weights, place=place, label=str(data.get('label', "")))
    except ValueError as e:
        raise ParseError(f"Invalid ensemble: {e}", details={'pointer': ""})


def load_ensemble(path: Union[str, Path]) -> ProductEnsemble:
    path = Path(path)
    if not path.is_file():
        raise InvalidMeasureFile(f"Ensemble file not found: {path}", details={'path': str(path)})
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise InvalidMeasureFile(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}",
                                 details={'path': str(path), 'line': e.lineno, 'column': e.colno})
    ensemble = parse_ensemble(data)
    logger.info(f"Loaded {ensemble.size}-matrix ensemble of dimension {ensemble.dimension} from {path}")
    return ensemble
