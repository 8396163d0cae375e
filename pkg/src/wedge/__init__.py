from .chevalley import (
    ChevalleyAlgebra, chevalley_basis, killing_form, orthogonal_complement, torus_action
)
from .exterior import (
    WedgeVector, SubRepresentation, act, xi_vector, check_highest_weight, generate_subrep
)
from .commutant import commutant_basis, commutant_invariant_subspace, invariant_closure, is_scalar_matrix

__all__ = [
    'ChevalleyAlgebra', 'chevalley_basis', 'killing_form', 'orthogonal_complement', 'torus_action',
    'WedgeVector', 'SubRepresentation', 'act', 'xi_vector', 'check_highest_weight', 'generate_subrep',
    'commutant_basis', 'commutant_invariant_subspace', 'invariant_closure', 'is_scalar_matrix'
]
