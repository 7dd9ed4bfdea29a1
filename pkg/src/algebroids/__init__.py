"""Flat local systems, twisted cohomology and characteristic classes of
commutative transitive algebroids over finite simplicial complexes."""

__version__ = "0.1.0"

from .algebroid import (
    CommAlgebroid,
    InvariantSectionSpace,
    change_splitting,
    chern_weil,
    chern_weil_image,
    invariant_sections,
    make_algebroid,
    pullback_algebroid,
    trivial_algebroid,
)
from .char_classes import (
    CharClassReport,
    Certificate,
    EdgeClass,
    brho_image,
    canonical_edge_class,
    char_class_report,
    image_dims,
    log_classes,
    sign_class,
    surjectivity_check,
)
from .cohomology import (
    CohomologyClass,
    CohomologySpace,
    TwistedCochain,
    boundary_matrix,
    coboundary,
    coboundary_matrix,
    cohomology,
    cohomology_dims,
    cup,
    cup_power,
    evaluate_on_chain,
    evaluate_on_loop,
    fundamental_cocycle,
    fundamental_cycle,
    induced_map,
    named_loop_cocycle,
    pair_flat,
    pullback_cochain,
    untwisted_class,
    untwisted_space,
    zero_cochain,
)
from .complexes import (
    Complex,
    SimplicialMap,
    SpanningTree,
    circle_model,
    compose,
    constant_map,
    contiguous,
    identity_map,
    loop_pairing,
    non_tree_edges,
    simplicial_map,
    spanning_tree,
    torus_grid,
    torus_model,
    validate_complex,
)
from .errors import (
    AlgebroidError,
    BaseMismatchError,
    DegreeError,
    DisconnectedComplexError,
    DomainMismatchError,
    InputError,
    MapMismatchError,
    MapValidationError,
    MissingFaceError,
    NonIncreasingTupleError,
    NotASubspaceError,
    NotClosedError,
    NotFlatError,
    NotInvariantError,
    RelationViolationError,
    SchemaError,
    SingularMatrixError,
    UnknownGeneratorError,
    UnsupportedBaseError,
    UnsupportedRankError,
)
from .jsonio import (
    SCHEMA_VERSION,
    algebroid_from_json,
    builtin_complex,
    cochain_from_json,
    cochain_to_json,
    complex_from_json,
    complex_to_json,
    dump_json,
    format_rational,
    load_json,
    map_from_json,
    parse_rational,
    representation_from_json,
    representation_to_json,
    resolve_complex_spec,
)
from .linalg import (
    BITS,
    Domain,
    FormalLog,
    GF2,
    LOGS,
    Matrix,
    RATIONALS,
    kernel_basis,
    quotient_basis,
    rref,
    solve,
)
from .local_systems import (
    Holonomy,
    LocalSystem,
    check_flat,
    dual,
    from_representation,
    gauge_transform,
    holonomy,
    holonomy_around,
    is_flat,
    iso_rank1,
    pullback_system,
    sym_power,
    tensor_power,
    tensor_system,
    trivial_system,
)
