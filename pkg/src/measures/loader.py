import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from ..algebra.quadratic import parse_rational, parse_scalar
from ..errors import InvalidMeasureFile, ParseError
from .elements import GROUPS, GroupElement, quaternion_to_rotation
from .measure import MeasureSpec

logger = logging.getLogger(__name__)


def _scalar(entry: Any, pointer: str):
    try:
        return parse_scalar(entry)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ParseError(f"Invalid scalar at {pointer}: {e}", details={'pointer': pointer})


def _atom(data: Any, group: str, pointer: str):
    if not isinstance(data, dict):
        raise ParseError(f"Atom at {pointer} must be an object", details={'pointer': pointer})
    if 'weight' not in data:
        raise ParseError(f"Missing weight at {pointer}", details={'pointer': f"{pointer}/weight"})
    try:
        weight = parse_rational(data['weight'])
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ParseError(f"Invalid weight at {pointer}/weight: {e}", details={'pointer': f"{pointer}/weight"})

    if 'quaternion' in data:
        entries = data['quaternion']
        if not isinstance(entries, list) or len(entries) != 4:
            raise ParseError(f"{pointer}/quaternion needs four entries",
                             details={'pointer': f"{pointer}/quaternion"})
        q = [_scalar(x, f"{pointer}/quaternion/{i}") for i, x in enumerate(entries)]
        if group == "SU2":
            element = GroupElement(group="SU2", quaternion=tuple(q))
        else:
            element = GroupElement(group="SO3", matrix=quaternion_to_rotation(q))
    elif 'matrix' in data:
        if group != "SO3":
            raise ParseError(f"Matrix atoms are only allowed in SO3 measures ({pointer})",
                             details={'pointer': f"{pointer}/matrix"})
        rows = data['matrix']
        if not isinstance(rows, list) or len(rows) != 3 or any(not isinstance(r, list) or len(r) != 3 for r in rows):
            raise ParseError(f"{pointer}/matrix must be 3x3", details={'pointer': f"{pointer}/matrix"})
        m = tuple(tuple(_scalar(x, f"{pointer}/matrix/{i}/{j}") for j, x in enumerate(row))
                  for i, row in enumerate(rows))
        element = GroupElement(group="SO3", matrix=m)
    else:
        raise ParseError(f"Atom at {pointer} needs a quaternion or a matrix", details={'pointer': pointer})

    try:
        element.validate()
    except ValueError as e:
        raise ParseError(f"Atom at {pointer} is not a group element: {e}", details={'pointer': pointer})
    return element, weight


def parse_measure(data: Dict[str, Any]) -> MeasureSpec:
    """Build and validate a MeasureSpec from the measure JSON schema."""
    if not isinstance(data, dict):
        raise ParseError("Measure document must be an object", details={'pointer': ""})
    group = data.get('group', "SU2")
    if group not in GROUPS:
        raise ParseError(f"Unknown group {group!r}", details={'pointer': "/group"})
    atoms_data = data.get('atoms')
    if not isinstance(atoms_data, list) or not atoms_data:
        raise ParseError("Measure needs a nonempty atoms list", details={'pointer': "/atoms"})
    symmetric = data.get('symmetric', False)
    if not isinstance(symmetric, bool):
        raise ParseError("symmetric must be a boolean", details={'pointer': "/symmetric"})

    atoms, weights = [], []
    for i, entry in enumerate(atoms_data):
        element, weight = _atom(entry, group, f"/atoms/{i}")
        atoms.append(element)
        weights.append(weight)

    measure = MeasureSpec(group=group, atoms=atoms, weights=weights, symmetric=symmetric,
                          label=str(data.get('label', "")))
    return measure.validate()


def load_measure(path: Union[str, Path]) -> MeasureSpec:
    path = Path(path)
    if not path.is_file():
        raise InvalidMeasureFile(f"Measure file not found: {path}", details={'path': str(path)})
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise InvalidMeasureFile(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}",
                                 details={'path': str(path), 'line': e.lineno, 'column': e.colno})
    measure = parse_measure(data)
    logger.info(f"Loaded {measure.group} measure with {measure.size} atoms from {path}")
    return measure


def save_measure(measure: MeasureSpec, path: Union[str, Path]):
    Path(path).write_text(json.dumps(measure.to_dict(), indent=2, sort_keys=True))
