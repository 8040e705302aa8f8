"""Cluster algebras of quivers, exchange graphs and cluster categories.

Vertices are 1-based everywhere in the public API, and ``b[i][j] > 0``
means there are ``b[i][j]`` arrows ``i -> j``.
"""

from .errors import (
    ClusterForgeError,
    ComplementCountViolation,
    CycleInconsistency,
    FormatError,
    InternalInconsistency,
    LoopError,
    MaximalityViolation,
    NegativeExponent,
    NegativeExt,
    NoMatchingModule,
    NonExactDivision,
    NotAcyclic,
    NotBijective,
    NotConnected,
    NotDynkin,
    QuiverError,
    ShapeMismatch,
    TheoremViolation,
    TwoCycleError,
    ZeroPolynomial,
)
from .quiver import (
    DiagramType,
    Quiver,
    canonical_form,
    diagram_type,
    from_arrows,
    from_matrix,
    is_acyclic,
    is_dynkin,
    is_isomorphic,
    kronecker,
    linear_quiver,
    mutate,
    oriented_diagram,
    parse_quiver,
)
from .laurent import (
    LaurentPolynomial,
    ReducedFraction,
    exact_div,
    format_laurent,
    parse_laurent,
    positivity_condition,
    reduced_form,
)
from .seeds import Seed, canonical_seed, initial_seed, mutate_seed
from .exchange import (
    ClassCache,
    ExchangeGraph,
    FiniteType,
    InfiniteType,
    Limits,
    MutationClass,
    check_finite_mutation_class,
    classify_finite_type,
    cluster_variables,
    enumerate_quiver_class,
    enumerate_seeds,
    verify_cluster_determines_seed,
    verify_unique_exchange,
)
from .representations import (
    Representation,
    build_indecomposables,
    ext_dim,
    hom_dim,
    positive_roots,
)
from .arquiver import ARQuiver, knit_ar_quiver
from .cluster_category import (
    CCObject,
    ClusterTiltingObject,
    CTGraph,
    Module,
    ShiftedProjective,
    TiltingSeed,
    check_selfinjective,
    cluster_tilted_ar_quiver,
    cluster_tilting_graph,
    denominator_correspondence,
    enumerate_cluster_tilting,
    exchange_pairs,
    ext1_cluster,
    tau_cluster,
    tilting_seed_quivers,
)

__version__ = "0.1.0"
