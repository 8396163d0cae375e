from ..algebra.linalg import wedge_power
from .balls import (
    GeneratorSet, HeightLedger, WordBall, free_ball_size, height_ledger, ledger_modulus, load_generators,
    parse_generators, word_ball
)
from .plucker import PluckerSystem, QuadraticRelation, non_pure_witness, plucker_relations, pure_tensor_subspace
from .certify import (
    AffineMap, Certificate, SubspaceCertifier, describe_ball, near_distance, solve_stabilizer_system,
    stabilizer_system
)

__all__ = [
    'wedge_power',
    'GeneratorSet', 'HeightLedger', 'WordBall', 'free_ball_size', 'height_ledger', 'ledger_modulus',
    'load_generators', 'parse_generators', 'word_ball',
    'PluckerSystem', 'QuadraticRelation', 'non_pure_witness', 'plucker_relations', 'pure_tensor_subspace',
    'AffineMap', 'Certificate', 'SubspaceCertifier', 'describe_ball', 'near_distance', 'solve_stabilizer_system',
    'stabilizer_system'
]
