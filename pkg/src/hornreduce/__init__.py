"""Derivation reduction for second-order function-free Horn clauses."""

from hornreduce.clauses import (
    ArityMismatchError,
    Atom,
    ClauseParseError,
    HornClause,
    PredVar,
    Substitution,
    Theory,
    alpha_equivalent,
    apply_substitution,
    canonical_form,
    canonical_key,
    compose,
    is_instance,
    mgu,
    parse_clause,
    parse_theory,
    pending_variables,
    rename_apart,
)
from hornreduce.fragments import (
    FragmentSpec,
    count_fragment,
    enumerate_fragment,
    horn,
    horn_2c,
    horn_c,
    member,
    most_general_in,
    single_splits,
)
from hornreduce.graphs import (
    ClauseGraph,
    LabeledEdge,
    LightPair,
    clause_graph,
    find_light_pair,
    is_connected,
    pair_outgoing_labels,
)
from hornreduce.reduction import (
    METHOD_FORWARD,
    METHOD_PARTITION,
    METHODS,
    OracleCapError,
    ReducibilityWitness,
    ReductionReport,
    c_base,
    cbase_resolution_reduction,
    cut_pending,
    extension_pairs,
    hnr_family,
    inverse_candidates,
    is_reducible,
    nonred_extend,
    reduce_fragment,
    reduce_theory,
    spanning_tree_split,
    triadic_counterexample,
)
from hornreduce.resolution import (
    KIND_FACTORING,
    KIND_RESOLUTION,
    KIND_SLD,
    KIND_UNIFICATION,
    MODES,
    ClosureResult,
    InferenceStep,
    Proof,
    SearchResult,
    closure,
    derives,
    factor,
    proof_from_json_dict,
    proof_to_json_dict,
    replay_proof,
    resolve,
    resolvents,
    search_derivation,
    single_step_candidates,
    unify_onto,
)

__version__ = "0.1.0"

__all__ = [
    "ArityMismatchError",
    "Atom",
    "ClauseGraph",
    "ClauseParseError",
    "ClosureResult",
    "FragmentSpec",
    "HornClause",
    "InferenceStep",
    "KIND_FACTORING",
    "KIND_RESOLUTION",
    "KIND_SLD",
    "KIND_UNIFICATION",
    "LabeledEdge",
    "LightPair",
    "METHODS",
    "METHOD_FORWARD",
    "METHOD_PARTITION",
    "MODES",
    "OracleCapError",
    "PredVar",
    "Proof",
    "ReducibilityWitness",
    "ReductionReport",
    "SearchResult",
    "Substitution",
    "Theory",
    "alpha_equivalent",
    "apply_substitution",
    "c_base",
    "canonical_form",
    "canonical_key",
    "cbase_resolution_reduction",
    "clause_graph",
    "closure",
    "compose",
    "count_fragment",
    "cut_pending",
    "derives",
    "enumerate_fragment",
    "extension_pairs",
    "factor",
    "find_light_pair",
    "hnr_family",
    "horn",
    "horn_2c",
    "horn_c",
    "inverse_candidates",
    "is_connected",
    "is_instance",
    "is_reducible",
    "member",
    "mgu",
    "most_general_in",
    "nonred_extend",
    "pair_outgoing_labels",
    "parse_clause",
    "parse_theory",
    "pending_variables",
    "proof_from_json_dict",
    "proof_to_json_dict",
    "reduce_fragment",
    "reduce_theory",
    "rename_apart",
    "replay_proof",
    "resolve",
    "resolvents",
    "search_derivation",
    "single_splits",
    "single_step_candidates",
    "spanning_tree_split",
    "triadic_counterexample",
    "unify_onto",
    "__version__",
]
