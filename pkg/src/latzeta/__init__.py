"""Zeta functions of abelian quotients of the affine-Weyl Cayley graph.

Exact computation and cross-verification of the positive-geodesic zeta (by
determinant, direction orders, character product, and geodesic enumeration),
the classical Ihara zeta via the Bass determinant, and the several-variable
Selberg-type zeta with its cone-sum rational closed form.
"""

from .errors import (
    BoxExhaustionError,
    DivergentSeriesError,
    MultigraphError,
    ResourceCapError,
    SingularMatrixError,
    ToleranceError,
    TypeZeroViolationError,
)
from .lattice import (
    AffineElement,
    ConeDecomposition,
    FaceDescriptor,
    LatticeVector,
    LengthVector,
    Permutation,
    all_faces,
    all_permutations,
    canonicalize,
    cone_decompose,
    face_length_exponents,
    is_face,
    length_vector,
    rational_cone_sum,
    type_of,
)
from .polynomials import IntPolynomial, MultiRational, MultiSeries
from .quotient import (
    AffineSubgroup,
    Character,
    FiniteAbelianGroup,
    TranslationSubgroup,
    characters,
    order_of,
    quotient_group,
    smith_normal_form,
)
from .cayley import (
    GeneratorSet,
    QuotientGraph,
    build_graph,
    export_edge_list,
    generator_set,
    perturb_adjacency,
    typed_adjacency,
)
from .zeta import (
    GeodesicClass,
    ZetaReport,
    enumerate_backtrackless_cycles,
    enumerate_positive_geodesics,
    euler_product_truncation,
    ihara_bass,
    ihara_zeta_series,
    lfunction,
    verify_theorems,
    zeta_positive_det,
    zeta_positive_orders,
)
from .selberg import (
    ComparisonReport,
    ConjugacyClass,
    affine_conjugacy_classes,
    comparison_check,
    find_conjugator,
    rational_geodesic_pattern,
    selberg_rational_translation,
    selberg_series_affine,
    selberg_series_translation,
)

__version__ = "0.1.0"
