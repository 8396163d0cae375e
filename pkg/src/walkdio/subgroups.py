import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.linalg import matvec
from ..errors import BadParameter, UndecidableMembership
from ..measures import GroupElement, multiply_quaternion_arrays, rotation_angle

logger = logging.getLogger(__name__)

KINDS = ("torus", "normalizer", "finite")

# float walks never land exactly on a subgroup
DISTANCE_FLOOR = 1e-12


def _unit(axis: Sequence[float]) -> np.ndarray:
    u = np.asarray([float(x) for x in axis])
    norm = np.linalg.norm(u)
    if norm == 0:
        raise BadParameter("Subgroup axis must be nonzero")
    return u / norm


def perpendicular(u: np.ndarray) -> np.ndarray:
    """A unit vector orthogonal to u."""
    reference = np.eye(3)[int(np.argmin(np.abs(u)))]
    w = np.cross(u, reference)
    return w / np.linalg.norm(w)


def axis_rotation(u: np.ndarray, angle: float) -> np.ndarray:
    return np.concatenate([[np.cos(angle / 2)], np.sin(angle / 2) * np.asarray(u)])


@dataclass
class SubgroupModel:
    """Closed subgroup of SO(3): a torus, its normalizer, or a finite group.

    SU(2) elements are tested through their SO(3) image.
    """
    kind: str
    axis: Optional[np.ndarray] = None
    quaternions: Optional[np.ndarray] = None
    elements: Tuple[GroupElement, ...] = ()
    exact_axis: Optional[Tuple] = None
    label: str = ""
    packing_radius: Optional[float] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadParameter(f"Unknown subgroup kind {self.kind!r}")
        if self.kind != "finite" and self.axis is None:
            raise BadParameter(f"A {self.kind} needs an axis")
        if self.kind == "finite" and (self.quaternions is None or len(self.quaternions) == 0):
            raise BadParameter("A finite subgroup needs at least the identity")

    @classmethod
    def torus(cls, axis, exact_axis: Optional[Sequence] = None) -> "SubgroupModel":
        u = _unit(axis)
        return cls(kind="torus", axis=u, exact_axis=tuple(exact_axis) if exact_axis is not None else None,
                   label=f"torus{np.round(u, 4).tolist()}")

    @classmethod
    def normalizer(cls, axis, exact_axis: Optional[Sequence] = None) -> "SubgroupModel":
        u = _unit(axis)
        return cls(kind="normalizer", axis=u, exact_axis=tuple(exact_axis) if exact_axis is not None else None,
                   label=f"normalizer{np.round(u, 4).tolist()}")

    @classmethod
    def finite(cls, elements: Sequence[GroupElement], label: str = "") -> "SubgroupModel":
        elements = tuple(elements)
        quaternions = np.array([g.float_quaternion for g in elements])
        model = cls(kind="finite", quaternions=quaternions, elements=elements,
                    label=label or f"finite({len(elements)})")
        model.packing_radius = _packing_radius(quaternions)
        return model

    @classmethod
    def trivial(cls, group: str = "SU2") -> "SubgroupModel":
        return cls.finite([GroupElement.identity(group)], label="trivial")

    @classmethod
    def cyclic(cls, axis, order: int) -> "SubgroupModel":
        u = _unit(axis)
        quaternions = np.array([axis_rotation(u, 2 * np.pi * k / order) for k in range(order)])
        return cls._from_float(quaternions, f"C{order}{np.round(u, 4).tolist()}")

    @classmethod
    def dihedral(cls, axis, order: int) -> "SubgroupModel":
        """Dihedral group of order 2*order: the cyclic group plus half-turns about perpendicular axes."""
        u = _unit(axis)
        w = perpendicular(u)
        rotations = [axis_rotation(u, 2 * np.pi * k / order) for k in range(order)]
        flip = np.concatenate([[0.0], w])
        flips = [multiply_quaternion_arrays(r, flip) for r in rotations]
        return cls._from_float(np.array(rotations + flips), f"D{order}{np.round(u, 4).tolist()}")

    @classmethod
    def _from_float(cls, quaternions: np.ndarray, label: str) -> "SubgroupModel":
        elements = tuple(GroupElement(group="SU2", quaternion=tuple(float(x) for x in q)) for q in quaternions)
        model = cls(kind="finite", quaternions=quaternions, elements=elements, label=label)
        model.packing_radius = _packing_radius(quaternions)
        return model

    @property
    def order(self) -> Optional[int]:
        return len(self.quaternions) if self.kind == "finite" else None

    def to_dict(self) -> Dict[str, Any]:
        result = {'kind': self.kind, 'label': self.label}
        if self.axis is not None:
            result['axis'] = [float(x) for x in self.axis]
        if self.kind == "finite":
            result['order'] = self.order
        return result


def _packing_radius(quaternions: np.ndarray) -> float:
    if len(quaternions) < 2:
        return np.pi
    distances = [
        float(np.min(rotation_angle(multiply_quaternion_arrays(
            quaternions[i] * np.array([1, -1, -1, -1]), quaternions[i + 1:]))))
        for i in range(len(quaternions) - 1)
    ]
    positive = [d for d in distances if d > DISTANCE_FLOOR]
    return min(positive) / 2 if positive else np.pi


def as_quaternions(g) -> np.ndarray:
    """(N, 4) float quaternions from a GroupElement, a list of them, or an array."""
    if isinstance(g, GroupElement):
        return g.float_quaternion[None, :]
    if isinstance(g, (list, tuple)) and g and isinstance(g[0], GroupElement):
        return np.array([x.float_quaternion for x in g])
    return np.atleast_2d(np.asarray(g, dtype=float))


def distance_to_subgroup(g, H: SubgroupModel) -> np.ndarray:
    """Angle-metric distance in SO(3) from each element to H, in closed form for tori and normalizers."""
    q = as_quaternions(g)
    q = q / np.linalg.norm(q, axis=1, keepdims=True)
    if H.kind == "finite":
        conj = H.quaternions * np.array([1.0, -1.0, -1.0, -1.0])
        relative = multiply_quaternion_arrays(conj[None, :, :], q[:, None, :])
        return np.min(2.0 * np.arctan2(np.linalg.norm(relative[..., 1:], axis=-1),
                                       np.abs(relative[..., 0])), axis=1)

    a = q[:, 0]
    v = q[:, 1:]
    along = v @ H.axis
    inside = np.hypot(a, along)
    across = np.linalg.norm(np.cross(v, H.axis), axis=1)
    to_torus = 2.0 * np.arctan2(across, inside)
    if H.kind == "torus":
        return to_torus
    return np.minimum(to_torus, 2.0 * np.arctan2(inside, across))


def contains(g: GroupElement, H: SubgroupModel) -> bool:
    """Exact membership of g in H; needs exact entries on both sides."""
    if not g.exact:
        raise UndecidableMembership("Membership needs exact entries", details={'element': g.to_dict()})
    rotation = g.rotation
    if H.kind == "finite":
        if not all(h.exact for h in H.elements):
            raise UndecidableMembership(f"Finite subgroup {H.label} has float elements")
        return any(rotation == h.rotation for h in H.elements)
    if H.exact_axis is None:
        raise UndecidableMembership(f"{H.label} has no exact axis")
    image = matvec(rotation, H.exact_axis)
    u = tuple(H.exact_axis)
    if tuple(image) == u:
        return True
    return H.kind == "normalizer" and tuple(image) == tuple(-x for x in u)


def haar_neighborhood_mass(H: SubgroupModel, r: float) -> float:
    """Normalized Haar mass of {g : d(g, H) <= r} in SO(3)."""
    if r < 0:
        raise BadParameter(f"Radius must be nonnegative, got {r}")
    if H.kind == "torus":
        return float(np.sin(min(r, np.pi) / 2) ** 2)
    if H.kind == "normalizer":
        if r >= np.pi / 2:
            raise BadParameter("Normalizer mass formula needs r < pi/2", details={'r': r})
        return float(2 * np.sin(r / 2) ** 2)
    if r > H.packing_radius:
        raise BadParameter(f"Radius {r} exceeds the packing radius {H.packing_radius} of {H.label}")
    # each element counts once in SO(3); q and -q are the same rotation
    rotations = len({tuple(np.round(np.sign(q[np.argmax(np.abs(q))]) * q, 9)) for q in H.quaternions})
    return float(rotations * (r - np.sin(r)) / np.pi)


def standard_family(axes: Sequence[np.ndarray], max_order: int) -> List[SubgroupModel]:
    """Tori, normalizers, cyclic and dihedral groups about each axis, plus the trivial group."""
    family = [SubgroupModel.trivial()]
    for u in axes:
        family.append(SubgroupModel.torus(u))
        family.append(SubgroupModel.normalizer(u))
        for order in range(2, max_order + 1):
            family.append(SubgroupModel.cyclic(u, order))
            if 2 * order <= max_order:
                family.append(SubgroupModel.dihedral(u, order))
    return family
