from .subgroups import (
    DISTANCE_FLOOR, SubgroupModel, axis_rotation, contains, distance_to_subgroup,
    haar_neighborhood_mass, perpendicular, standard_family
)
from .sampler import ExactLaw, WalkSample, WalkSampler, enumerate_walk, return_profile, walk_rng
from .kesten import free_group_return_probabilities, kesten_baseline
from .profile import (
    DioProfile, DiophantineProfiler, cluster_axes, diophantine_constants, fit_decay, rotation_axes
)

__all__ = [
    'DISTANCE_FLOOR', 'SubgroupModel', 'axis_rotation', 'contains', 'distance_to_subgroup',
    'haar_neighborhood_mass', 'perpendicular', 'standard_family',
    'ExactLaw', 'WalkSample', 'WalkSampler', 'enumerate_walk', 'return_profile', 'walk_rng',
    'free_group_return_probabilities', 'kesten_baseline',
    'DioProfile', 'DiophantineProfiler', 'cluster_axes', 'diophantine_constants', 'fit_decay',
    'rotation_axes'
]
