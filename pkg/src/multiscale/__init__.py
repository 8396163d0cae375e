from .cloud import NeighborIndex, PointCloud, ball_volume, chord_radius, sample_ball
from .covering import CoveringReport, DyadicLevels, covering_number, dyadic_decompose, greedy_centers
from .energy import EnergyCounter, EnergyReport
from .flattening import FlatteningAnalyzer, l2_norm
from .fit import SubgroupFitter, principal_axis

__all__ = [
    'NeighborIndex', 'PointCloud', 'ball_volume', 'chord_radius', 'sample_ball',
    'CoveringReport', 'DyadicLevels', 'covering_number', 'dyadic_decompose', 'greedy_centers',
    'EnergyCounter', 'EnergyReport',
    'FlatteningAnalyzer', 'l2_norm',
    'SubgroupFitter', 'principal_axis'
]
