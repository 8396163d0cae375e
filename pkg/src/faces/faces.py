import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Sequence, Tuple

from ..errors import InadmissibleSpec, NotInChamber, ZeroVector
from ..rootsys import (
    RootSystem, SumDual, Weight, classify_highest_root, root_system, weyl_stabilizer
)
from ..rootsys.types import RationalVector, vec_add

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChamberFace:
    """Face of the Weyl chamber with canonical representative sum of omega_i over the support."""
    support: Tuple[int, ...]
    canonical_X: RationalVector

    def label(self) -> List[int]:
        return [i + 1 for i in self.support]


@dataclass(frozen=True)
class FaceData:
    X: RationalVector
    extremal_roots: Tuple[int, ...]
    omega_X: Weight

    @property
    def m(self) -> int:
        return len(self.extremal_roots)


@dataclass(frozen=True)
class Verdict:
    face: ChamberFace
    data: FaceData
    intersection: FrozenSet[int]
    hypothesis_met: bool
    holds: bool

    @property
    def lemma_consistent(self) -> bool:
        return self.holds or not self.hypothesis_met


def _coords(X) -> RationalVector:
    return tuple(Fraction(x) for x in X)


def face_of(rs: RootSystem, X) -> FaceData:
    """Roots maximizing <alpha, X> for X in the closed Weyl chamber."""
    X = _coords(X)
    if len(X) != rs.ambient_dim:
        raise ValueError(f"X has dimension {len(X)}, expected {rs.ambient_dim}")
    pairings = rs.fw_coords(X)
    if all(c == 0 for c in pairings):
        raise ZeroVector(f"X is zero on the root space of {rs.name}")
    if any(c < 0 for c in pairings):
        raise NotInChamber(f"X is outside the closed Weyl chamber of {rs.name}",
                           details={'pairings': [str(c) for c in pairings]})

    values = [rs.inner(root, X) for root in rs.all_roots]
    top = max(values)
    extremal = tuple(k for k, value in enumerate(values) if value == top)

    omega = tuple(Fraction(0) for _ in range(rs.ambient_dim))
    for k in extremal:
        omega = vec_add(omega, rs.all_roots[k])

    return FaceData(X=X, extremal_roots=extremal, omega_X=rs.weight(omega))


def enumerate_faces(rs: RootSystem) -> List[ChamberFace]:
    faces = []
    for size in range(1, rs.rank + 1):
        for support in itertools.combinations(range(rs.rank), size):
            coords = [1 if i in support else 0 for i in range(rs.rank)]
            faces.append(ChamberFace(support=support, canonical_X=rs.from_fw_coords(coords)))
    return faces


def canonical_face(rs: RootSystem, X) -> ChamberFace:
    pairings = rs.fw_coords(_coords(X))
    support = tuple(i for i, c in enumerate(pairings) if c != 0)
    coords = [1 if i in support else 0 for i in range(rs.rank)]
    return ChamberFace(support=support, canonical_X=rs.from_fw_coords(coords))


def is_collinear(x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """Exact collinearity of two coordinate vectors: every 2x2 minor vanishes."""
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            if x[i] * y[j] - x[j] * y[i] != 0:
                return False
    return True


def hypothesis_met(rs: RootSystem, X) -> bool:
    classification = classify_highest_root(rs)
    if not isinstance(classification, SumDual) or classification.self_dual:
        return True
    x = rs.fw_coords(_coords(X))
    return not (is_collinear(x, classification.omega.fw_coords)
                or is_collinear(x, classification.omega_dual.fw_coords))


class FaceVerifier:
    def __init__(self, settings):
        self.settings = settings
        self._stabilizers: Dict[str, list] = {}

    def _stabilizer(self, rs: RootSystem):
        if rs.name not in self._stabilizers:
            self._stabilizers[rs.name] = weyl_stabilizer(rs, rs.highest_root, self.settings.weyl_group_limit)
            logger.debug(f"{rs.name}: highest root stabilizer has {len(self._stabilizers[rs.name])} elements")
        return self._stabilizers[rs.name]

    def verify_face_lemma(self, rs: RootSystem, face: ChamberFace) -> Verdict:
        """Intersect the W-translates of the face over the highest-root stabilizer."""
        data = face_of(rs, face.canonical_X)
        intersection = set(data.extremal_roots)
        for w in self._stabilizer(rs):
            intersection &= {w.permutation[k] for k in data.extremal_roots}
            if not intersection:
                break

        met = hypothesis_met(rs, face.canonical_X)
        holds = intersection == {rs.highest_root_index}
        if met and not holds:
            logger.warning(f"{rs.name}: face {face.label()} satisfies the hypothesis but the "
                           f"intersection has {len(intersection)} roots")
        return Verdict(face=face, data=data, intersection=frozenset(intersection),
                       hypothesis_met=met, holds=holds)

    def verify_type(self, family: str, rank: int) -> List[Dict[str, Any]]:
        rs = root_system(family, rank)
        records = []
        for face in enumerate_faces(rs):
            verdict = self.verify_face_lemma(rs, face)
            records.append(self.verdict_record(rs, verdict))
        logger.info(f"{rs.name}: verified {len(records)} faces")
        return records

    def verify_all_faces(self, families: Iterable[str], max_rank: int,
                         min_rank: int = 1) -> List[Dict[str, Any]]:
        types = admissible_types(families, max_rank, min_rank)
        with ThreadPoolExecutor(max_workers=self.settings.spectra_threads) as pool:
            results = list(pool.map(lambda t: self.verify_type(*t), types))
        return [record for batch in results for record in batch]

    @staticmethod
    def verdict_record(rs: RootSystem, verdict: Verdict) -> Dict[str, Any]:
        return {
            'type': rs.name,
            'support': verdict.face.label(),
            'm_X': verdict.data.m,
            'omega_X': [str(c) for c in verdict.data.omega_X.fw_coords],
            'intersection_size': len(verdict.intersection),
            'hypothesis_met': verdict.hypothesis_met,
            'holds': verdict.holds
        }


def admissible_types(families: Iterable[str], max_rank: int, min_rank: int = 1) -> List[Tuple[str, int]]:
    minimum = {"A": 1, "B": 2, "C": 2, "D": 4}
    fixed = {"E": (6, 7, 8), "F": (4,), "G": (2,)}
    types = []
    for family in families:
        family = family.upper()
        if family not in minimum and family not in fixed:
            raise InadmissibleSpec(f"Unknown root system family {family!r}")
        if family in fixed:
            ranks = [r for r in fixed[family] if min_rank <= r <= max_rank]
        else:
            ranks = range(max(minimum[family], min_rank), max_rank + 1)
        types.extend((family, r) for r in ranks)
    return types
