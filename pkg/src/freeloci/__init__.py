"""Exact factorization of noncommutative polynomials and free loci of monic pencils."""

from .linalg import QMatrix, Subspace, char_poly, kernel, kron, rref
from .ncpoly import NCPoly, eval_nc
from .cpoly import CPoly, det_cpoly, det_generic
from .pencil import MatrixTuple, MonicPencil
from .matalg import (
    Irreducible,
    NeedsExtension,
    NeedsExtensionError,
    algebra_span,
    block_triangularize,
    find_invariant_subspace,
    fl_minimal_blocks,
    irreducible_invariant_subspace,
    is_irreducible_pencil,
    is_jointly_nilpotent,
    pencil_similar,
)
from .realization import (
    Realization,
    higman_linearize,
    invert_realization,
    minimize,
    realization_to_poly,
    realize_inverse_of_poly,
    similarity_between,
)
from .factorization import factor, is_atom, locus_equal, locus_subset, stably_associated_atoms
from .perturbation import PerturbationData, check_nondegenerate, complementary_invariant

__version__ = "0.1.0"
