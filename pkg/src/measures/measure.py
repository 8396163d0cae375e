import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from ..algebra.quadratic import format_rational
from ..errors import NotProbability, NotSymmetric
from .elements import GroupElement

logger = logging.getLogger(__name__)

Weight = Union[Fraction, float]

WEIGHT_TOLERANCE = 1e-12


@dataclass
class MeasureSpec:
    """Finitely supported probability measure on SU(2) or SO(3).

    Weights are exact rationals for measures read from files; quadrature
    measures carry float weights.
    """
    group: str
    atoms: List[GroupElement]
    weights: List[Weight]
    symmetric: bool = False
    label: str = ""
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.atoms) != len(self.weights):
            raise ValueError(f"{len(self.atoms)} atoms but {len(self.weights)} weights")
        for atom in self.atoms:
            if atom.group != self.group:
                raise ValueError(f"Atom of group {atom.group} in a {self.group} measure")

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights) and all(a.exact for a in self.atoms)

    @property
    def size(self) -> int:
        return len(self.atoms)

    def validate(self):
        """Check positivity, total mass 1 and, when declared, symmetry."""
        if not self.atoms:
            raise NotProbability("Measure has no atoms")
        if any(w <= 0 for w in self.weights):
            raise NotProbability("Weights must be positive",
                                 details={'weights': [str(w) for w in self.weights]})
        total = sum(self.weights)
        if all(isinstance(w, Fraction) for w in self.weights):
            ok = total == 1
        else:
            ok = abs(float(total) - 1.0) <= WEIGHT_TOLERANCE * max(1, len(self.weights))
        if not ok:
            raise NotProbability(f"Weights sum to {total}, not 1", details={'total': str(total)})
        if self.symmetric:
            self.check_symmetric()
        return self

    def check_symmetric(self):
        mass: Dict[tuple, Weight] = {}
        for atom, weight in zip(self.atoms, self.weights):
            mass[atom.key()] = mass.get(atom.key(), 0) + weight
        for atom in self.atoms:
            inverse_key = atom.inverse().key()
            if inverse_key not in mass or mass[inverse_key] != mass[atom.key()]:
                raise NotSymmetric("Measure is declared symmetric but an inverse atom is missing "
                                   "or carries a different weight",
                                   details={'atom': atom.to_dict()})

    @property
    def float_weights(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])

    @property
    def quaternions(self) -> np.ndarray:
        """(size, 4) float quaternion lifts of the atoms."""
        return np.array([atom.float_quaternion for atom in self.atoms])

    @classmethod
    def dirac(cls, group: str = "SU2") -> "MeasureSpec":
        return cls(group=group, atoms=[GroupElement.identity(group)], weights=[Fraction(1)],
                   symmetric=True, label="dirac")

    @classmethod
    def uniform(cls, atoms: Sequence[GroupElement], symmetric: bool = False, label: str = "") -> "MeasureSpec":
        atoms = list(atoms)
        if not atoms:
            raise NotProbability("Measure has no atoms")
        weight = Fraction(1, len(atoms))
        return cls(group=atoms[0].group, atoms=atoms, weights=[weight] * len(atoms),
                   symmetric=symmetric, label=label).validate()

    @classmethod
    def symmetric_uniform(cls, generators: Sequence[GroupElement], label: str = "") -> "MeasureSpec":
        """Uniform measure on the generators together with their inverses."""
        atoms = []
        for g in generators:
            atoms.extend([g, g.inverse()])
        return cls.uniform(atoms, symmetric=True, label=label)

    def to_dict(self) -> Dict[str, Any]:
        def fmt(w):
            return format_rational(w) if isinstance(w, Fraction) else float(w)
        return {
            'group': self.group,
            'symmetric': self.symmetric,
            'atoms': [dict(atom.to_dict(), weight=fmt(w)) for atom, w in zip(self.atoms, self.weights)]
        }
