"""urncheck: exact negative-dependence verification for independent urn
models, with the supporting orientation-counting and weighted-matching
calculus.

Everything is exact rational arithmetic; property checkers return reports
whose failure witnesses re-verify from their serialized form.
"""

from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .bipartite import (
    FlowCertificate,
    RankedLevelPoset,
    WeightedBipartiteGraph,
    check_griggs_lym,
    check_hall_weighted,
    check_lym_independent,
    complement_product_weights,
    find_flow_certificate,
    middle_levels_graph,
    validate_certificate,
)
from .measures import (
    ExternalField,
    FiniteMeasure,
    SetMeasure,
    UpSet,
    ZeroMassConditionError,
    affects,
    condition,
    condition_set_measure,
    disjoint_dependence,
    dominance_coupling,
    event_probability,
    impose_external_field,
    level_conditional,
    marginal,
    negatively_correlated,
    rv_negatively_correlated,
    stochastically_dominates,
    stochastically_dominates_exhaustive,
)
from .orientations import (
    MultiGraph,
    Orientation,
    ball_count_table,
    brute_M_ball,
    brute_M_occ,
    contract_edge,
    delete_edge,
    iter_orientations,
    level_reduction_check,
    occ_count_table,
    perfect_matchings,
    pg_decomposition_check,
    rec_M_ball,
    rec_M_occ,
    split_vertex,
    verify_orientation_nmp,
)
from .properties import (
    PropertyReport,
    check_CFM,
    check_CNA,
    check_CNC,
    check_FM,
    check_NA,
    check_NC,
    check_NMP,
    check_Rayleigh,
    check_SCP,
    check_ULC,
    rank_sequence,
    replay_witness,
)
from .urns import (
    BudgetExceededError,
    IntervalSpec,
    UrnModel,
    ball_set_measure_ball,
    ball_set_measure_occ,
    enumerate_assignments,
    enumeration_measure,
    interval_measure,
    occupation_measure,
    refine_model,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
