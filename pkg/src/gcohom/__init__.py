"""Exact-arithmetic engine for graph complexes and hairy graph complexes.

Generators are isomorphism classes of multigraphs with external legs,
modulo an orientation that depends on the parity; the differentials and
auxiliary operators (vertex splitting, edge adding, hair-to-edge, vertex
deletion and friends) are realized as exact sparse matrices between graded
bases, from which cohomology dimensions are read off.
"""

from .complexes import (
    Basis,
    ComplexSpec,
    HGC,
    UR,
    component_split,
    constraint_filter,
    degree,
    enumerate_basis,
    fGC,
    fGCc,
    fHGC,
    fHGCc,
)
from .elements import alpha, big_sigma, build_element, lambda_, pi_f, rho, sigma, union
from .graphs import CanonicalGraph, GradedSlice, LabeledGraph, canonicalize
from .homology import (
    CohomologyReport,
    IdentityReport,
    cohomology_at_slice,
    cohomology_dim,
    cohomology_fd,
    euler_check_chain,
    euler_check_fd,
    slices_for_fd,
    verify_identity,
)
from .linalg import SparseMatrix, image_basis, rank
from .operators import (
    AugmentedVector,
    GraphVector,
    OperatorExpr,
    apply_expr,
    assemble_matrix,
    compose,
    delta_aug_hair,
    delta_prime,
    op,
)

__version__ = "0.1.0"
