"""Projection lattices of finite-dimensional operator algebras.

The package works on direct sums of full complex matrix algebras.  It
computes the lattice operations on projections, the two-projection
canonical form, LS-orthogonality, graph projections over an order-3
frame, and the coordinatization pipeline that turns a projection
lattice isomorphism into the ring isomorphism inducing it, together
with the orthogonality-preserving extension and the inner factorization
of ring isomorphisms.
"""

from .core import (
    DEFAULT_TOL,
    AlgebraShape,
    Element,
    Projection,
    Tolerances,
    center_valued_norm,
    close,
    cond,
    distance,
    invert,
    is_central,
    left_support,
    polar_decompose,
    right_support,
)
from .coordinatize import (
    CoordinatizationResult,
    UniquenessReport,
    block_split9,
    coordinatize,
    normalize_map,
    order_frame,
    uniqueness_residual,
)
from .errors import (
    BadSplit,
    DegenerateWitness,
    FrameAssemblyFailed,
    IntertwiningFailure,
    NotAFrame,
    NotAGraphProjection,
    NotAProjection,
    NotComplementary,
    NotInvertible,
    NotInvertibleProvenance,
    NotLSOrthogonal,
    NotOrderThree,
    NotRealLinear,
    NotRingIso,
    OrthogonalityNotPreserved,
    PreconditionViolated,
    ProjlatError,
    ShapeMismatch,
    SlotMismatch,
)
from .graphs import (
    ThreeFrame,
    graph_projection,
    inverse_coincidence,
    is_slot_graph_projection,
    lattice_product,
    lattice_sum,
    recover_operator,
)
from .halmos import (
    HalmosDecomposition,
    corner_witness_projection,
    halmos_decompose,
    ls_char_minimal_cover,
    ls_orthogonal,
    orthogonalizer,
    reconstruct,
)
from .lattice import (
    canonicalize,
    central_support,
    is_central_projection,
    join,
    leq,
    meet,
    mv_equivalent,
    perspectivity_witness,
    principal_ideal_leq,
)
from .maps import (
    LatticeMap,
    MapVerification,
    compose,
    from_conjugation,
    from_ring_iso,
    from_semilinear,
    invert_map,
    preserves_orthogonality,
    verify_lattice_iso,
)
from .report import CheckResult, Report, run_check
from .ringiso import (
    RingIsoFactorization,
    classify_linearity,
    dye_extension,
    inner_factor,
)
from .sampling import (
    random_element,
    random_hermitian,
    random_invertible,
    random_pair_with_angles,
    random_pair_with_trivial_meet,
    random_projection,
    random_unitary,
    rng_from,
)
from .serialize import (
    ConjugationRingIso,
    element_from_obj,
    element_to_obj,
    frame_from_obj,
    frame_to_obj,
    halmos_to_obj,
    load_json,
    map_from_obj,
    map_to_obj,
    pair_from_obj,
    pair_to_obj,
    projection_from_obj,
    projection_to_obj,
    ring_iso_from_obj,
    ring_iso_to_obj,
    save_json,
)
from .suite import verify_suite

__version__ = "0.1.0"

__all__ = [
    "AlgebraShape",
    "BadSplit",
    "CheckResult",
    "ConjugationRingIso",
    "CoordinatizationResult",
    "DEFAULT_TOL",
    "DegenerateWitness",
    "Element",
    "FrameAssemblyFailed",
    "HalmosDecomposition",
    "IntertwiningFailure",
    "LatticeMap",
    "MapVerification",
    "NotAFrame",
    "NotAGraphProjection",
    "NotAProjection",
    "NotComplementary",
    "NotInvertible",
    "NotInvertibleProvenance",
    "NotLSOrthogonal",
    "NotOrderThree",
    "NotRealLinear",
    "NotRingIso",
    "OrthogonalityNotPreserved",
    "PreconditionViolated",
    "ProjlatError",
    "Projection",
    "Report",
    "RingIsoFactorization",
    "ShapeMismatch",
    "SlotMismatch",
    "ThreeFrame",
    "Tolerances",
    "UniquenessReport",
    "block_split9",
    "canonicalize",
    "center_valued_norm",
    "central_support",
    "classify_linearity",
    "close",
    "compose",
    "cond",
    "coordinatize",
    "corner_witness_projection",
    "distance",
    "dye_extension",
    "element_from_obj",
    "element_to_obj",
    "frame_from_obj",
    "frame_to_obj",
    "from_conjugation",
    "from_ring_iso",
    "from_semilinear",
    "graph_projection",
    "halmos_decompose",
    "halmos_to_obj",
    "inner_factor",
    "invert",
    "invert_map",
    "inverse_coincidence",
    "is_central",
    "is_central_projection",
    "is_slot_graph_projection",
    "join",
    "lattice_product",
    "lattice_sum",
    "leq",
    "left_support",
    "load_json",
    "ls_char_minimal_cover",
    "ls_orthogonal",
    "map_from_obj",
    "map_to_obj",
    "meet",
    "mv_equivalent",
    "normalize_map",
    "order_frame",
    "orthogonalizer",
    "pair_from_obj",
    "pair_to_obj",
    "perspectivity_witness",
    "polar_decompose",
    "preserves_orthogonality",
    "principal_ideal_leq",
    "projection_from_obj",
    "projection_to_obj",
    "random_element",
    "random_hermitian",
    "random_invertible",
    "random_pair_with_angles",
    "random_pair_with_trivial_meet",
    "random_projection",
    "random_unitary",
    "reconstruct",
    "recover_operator",
    "right_support",
    "ring_iso_from_obj",
    "ring_iso_to_obj",
    "rng_from",
    "run_check",
    "save_json",
    "uniqueness_residual",
    "verify_lattice_iso",
    "verify_suite",
]
