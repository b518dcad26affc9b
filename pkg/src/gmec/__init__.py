"""Linear marking constraints on ordinary Petri nets with uncontrollable
transitions: reachability, admissible marking sets, the gain-shift
constraint transformation, and order-sensitivity analysis."""

from gmec.constraints import (
    LinearConstraint,
    admissible_set,
    disjunction_admissible,
    disjunction_legal,
    is_admissible,
    is_weakly_admissible,
    is_zero_semantic,
    is_zero_syntactic,
    legal_set,
    make_constraint,
    transition_gain,
)
from gmec.net import (
    Marking,
    OrdinaryNet,
    Transition,
    fire,
    incidence,
    is_enabled,
    make_net,
    postset,
    preset,
    validate,
)
from gmec.reachability import (
    DEFAULT_LIMITS,
    ExploreLimits,
    ReachGraph,
    reach,
    reach_complete,
    uc_reach,
)
from gmec.transform import (
    apply_sequence,
    complement_weight_set,
    gain_shift,
    prune_zero,
    transform_at,
    transform_set_at,
    transform_to_weak_admissible,
)
from gmec.analysis import (
    HuntConfig,
    Verdict,
    equivalence_check,
    hunt,
    order_sensitivity,
    verify_counterexample,
)
from gmec.fixtures import counterexample_instance

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_LIMITS",
    "ExploreLimits",
    "HuntConfig",
    "LinearConstraint",
    "Marking",
    "OrdinaryNet",
    "ReachGraph",
    "Transition",
    "Verdict",
    "admissible_set",
    "apply_sequence",
    "complement_weight_set",
    "counterexample_instance",
    "disjunction_admissible",
    "disjunction_legal",
    "equivalence_check",
    "fire",
    "gain_shift",
    "hunt",
    "incidence",
    "is_admissible",
    "is_enabled",
    "is_weakly_admissible",
    "is_zero_semantic",
    "is_zero_syntactic",
    "legal_set",
    "make_constraint",
    "make_net",
    "order_sensitivity",
    "postset",
    "preset",
    "prune_zero",
    "reach",
    "reach_complete",
    "transform_at",
    "transform_set_at",
    "transform_to_weak_admissible",
    "transition_gain",
    "uc_reach",
    "validate",
    "verify_counterexample",
]
