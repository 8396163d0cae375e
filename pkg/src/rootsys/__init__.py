from .types import (
    RootSystemSpec, RootSystem, Weight, WeylElement, Fundamental, SumDual, Classification
)
from .builder import build_root_system, root_system, expected_root_count, to_json
from .weyl import (
    weyl_group, weyl_group_order, weyl_stabilizer, weyl_dimension, dual_weight,
    dual_index, dimension_constant, to_dominant
)
from .classify import classify_highest_root, classification_record

__all__ = [
    'RootSystemSpec', 'RootSystem', 'Weight', 'WeylElement', 'Fundamental', 'SumDual',
    'Classification', 'build_root_system', 'root_system', 'expected_root_count', 'to_json',
    'weyl_group', 'weyl_group_order', 'weyl_stabilizer', 'weyl_dimension', 'dual_weight',
    'dual_index', 'dimension_constant', 'to_dominant', 'classify_highest_root',
    'classification_record'
]
