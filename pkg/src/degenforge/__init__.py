"""Finite semisimplicial sets: horn-filling checks and degeneracy synthesis."""

from .errors import (
    CertificateMismatch,
    ConsistencyViolation,
    DegenforgeError,
    DimensionTooLow,
    IncompatibleHorn,
    IncompatibleSubcomplexStructure,
    InvalidCategory,
    InvalidDegeneracyTable,
    MissingDegeneracies,
    MissingWitness,
    NoIdempotentEquivalence,
    NotASelfEdge,
    NotKan,
    NotQuasiSemicategory,
    ParseError,
    RestrictionMismatch,
    TruncationExhausted,
    UnfillableHorn,
)
from .sset import (
    ProductBundle,
    SemisimplicialMap,
    SemisimplicialSet,
    SimplexRef,
    Subcomplex,
    ValidationReport,
    first_edge,
    identity_map,
    last_edge,
    product,
    validate,
    validate_map,
)
from .horn import (
    EdgeVerdict,
    FibrationVerdict,
    Horn,
    HornVerdict,
    check_inner,
    compatibility_failures,
    check_inner_fibration,
    check_kan,
    compatible_horns,
    edge_property,
    fillers,
    find_idempotent_equivalences,
    is_equivalence,
    is_idempotent,
    p_edge_property,
)
from .degeneracy import (
    AddendumS0,
    DegeneracyTable,
    GoodSystem,
    SimplicialReport,
    SynthesisInput,
    SynthesisResult,
    TTable,
    addendum_s0,
    forced_value,
    replay_certificate,
    step1_extend,
    step2_correct,
    synthesize,
    synthesize_relative,
    verify_simplicial,
)
from .nerve import (
    Arrow,
    CategoryPresentation,
    NerveBundle,
    UniquenessDemo,
    cyclic_group,
    equivalence_criterion,
    idempotent_monoid,
    j_groupoid,
    nerve,
    one_arrow_category,
    poset_01,
    poset_category,
    product_category,
    simplex_category,
    uniqueness_demo,
)

__version__ = "0.1.0"
