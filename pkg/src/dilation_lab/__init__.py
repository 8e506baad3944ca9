"""Numerical toolkit for dilations of contractive operator tuples.

Builds the minimal isometric (noncommuting) dilation and the standard
commuting dilation of row contractions on truncated Fock spaces, computes
maximal commuting pieces by two cross-checked characterizations, and
classifies window-exact Cuntz-relation tuples by the joint spectral atoms
of their spherical parts.
"""

from .cuntz import (
    SphericalAtoms,
    SphericalDecomposition,
    equivalent_spherical,
    spectral_atoms,
    spherical_decomposition,
)
from .dilate import (
    DilationResult,
    SchaefferDefect,
    cuntz_state_rep,
    embedding_gram,
    poisson_check,
    poisson_value,
    pure_embedding,
    schaeffer_defect,
    schaeffer_defect_action,
    schaeffer_dilation,
    standard_commuting_dilation_pure,
    tail_bound,
)
from .errors import (
    CharacterizationMismatch,
    DiagonalizationError,
    DilationLabError,
    PreconditionError,
)
from .fock import (
    SymmetricBasis,
    TruncatedFock,
    compressed_tuple,
    creation_tuple,
    enumerate_indices,
    symmetric_basis,
)
from .piece import (
    PieceResult,
    Subspace,
    adjoint_kernel,
    commutator_closure,
    compress,
    maximal_commuting_piece,
    piece_intersection_check,
)
from .tuples import (
    DefectData,
    OperatorTuple,
    apply_word,
    defect,
    direct_sum,
    is_commuting,
    is_pure,
    is_row_contraction,
    is_spherical_unitary,
    noncommuting_cuntz_pair,
    scalar_tuple,
    tensor_with_identity,
    zero_tuple,
)

__version__ = "0.1.0"
