"""reeskit: Rees algebras, blowups and intersection multiplicities over GF(p)."""

from .polyring import (
    FreeModuleMap, Polynomial, RingDescriptor, RingMap, RingMismatchError,
    make_ring, parse_poly, random_poly, transport,
)
from .gb import (
    GroebnerBasis, Ideal, INFINITY, colon, dimension_and_degree, eliminate,
    graded_piece_dim, groebner_basis, hilbert_series, ideal,
    intersect_ideals, kernel_of_matrix, kernel_of_ring_map, minors_ideal,
    normal_form, radical_membership, ring_dimension, saturate,
    trim_homogeneous,
)
from .coeff import (
    GFElement, KroneckerBoundError, factor_multivariate, factor_univariate,
)
from .decompose import ComponentReport, minimal_primes
from .rees import (
    PresentedModule, ReductionCertificate, ReesAlgebraPresentation,
    analytic_spread, expected_rees_ideal, is_linear_type, is_reduction,
    jacobian_dual, minimal_reduction, multiplicity, normal_cone,
    reduction_number, rees_ideal, rees_presentation, special_fiber_ideal,
    symmetric_algebra_ideal, symmetric_kernel, universal_embedding, which_gm,
)
from .intersection import WeightedComponent, distinguished, intersect_in_p
from .blowup import (
    BlowupChart, blowup_of, is_smooth_away_from_irrelevant,
    singular_locus_ideal, strict_transform, total_transform,
)

__version__ = "0.1.0"
