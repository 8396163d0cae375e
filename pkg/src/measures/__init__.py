from .elements import (
    GroupElement, quaternion_multiply, quaternion_to_rotation, rotation_to_quaternion,
    multiply_quaternion_arrays, canonicalize_quaternions, rotation_angle, quaternion_distance
)
from .measure import MeasureSpec
from .loader import load_measure, parse_measure, save_measure

__all__ = [
    'GroupElement', 'quaternion_multiply', 'quaternion_to_rotation', 'rotation_to_quaternion',
    'multiply_quaternion_arrays', 'canonicalize_quaternions', 'rotation_angle', 'quaternion_distance',
    'MeasureSpec', 'load_measure', 'parse_measure', 'save_measure'
]
