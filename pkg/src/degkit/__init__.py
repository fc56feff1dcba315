"""degkit: exact symbolic and combinatorial toolkit for expanded-model
charts, the two-branch node ring with its pure-contact calculus, and the
gluing combinatorics of weighted graphs.

Everything computes over exact rationals; no floating point anywhere.
"""

from .combgraphs import (
    AdmissibleGraph,
    AdmissibleTriple,
    ClassGroup,
    EnumerationCaps,
    GluedGraph,
    GraphError,
    NUMERIC_GROUP,
    Piece,
    RelSplit,
    SplitMap,
    SplitMapError,
    TopType,
    TripleAlphabet,
    ample_weights,
    decompose,
    enumerate_split_maps,
    enumerate_stable_types,
    enumerate_triples,
    eq_group,
    fiber_count,
    glue,
    glue_halves,
    graph_from_json,
    half_to_graph,
    is_stable,
    max_length_bound,
    phi_degree,
    realize_split_map,
    specialization_sum_check,
    split_map_from_json,
    triples_equivalent,
    verify_norm_identity,
    weight,
)
from .contact import (
    ContactData,
    ContactError,
    ContactReport,
    ForcingReport,
    check_pure_contact,
    combined_predeformability_ideal,
    contact_orders,
    enumerate_homs,
    flat_local_forcing,
    is_nondegenerate,
    predeformability_ideal,
    verify_base_change,
    verify_universality,
)
from .exactalg import (
    AlgebraElement,
    AlgebraHom,
    AlgebraIdeal,
    NodeRing,
    NodeSeries,
    TruncatedAlgebra,
    adjoin_nilpotent,
    element_from_json,
    hom_apply,
    ideal_membership,
    normal_form,
    normal_form_stepwise,
    series_from_json,
    series_invert,
    series_mul,
)
from .localmodel import (
    CheckResult,
    FourfoldResolution,
    GammaAtlas,
    Report,
    StandardEmbedding,
    TorusHom,
    fourfold_resolution,
    gamma_atlas,
    principal_chart_map,
    relative_action,
    splice_check,
    standard_embedding,
    verify_atlas,
    verify_principal_chart,
    verify_resolution,
)
from .polys import Poly, RatFunc
from .ratmaps import RationalMap, compose, equal_on_dense

__version__ = "0.1.0"
