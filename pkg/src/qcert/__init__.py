"""Classical simulation of certification testers for pure-state membership
and unitary equality, built on the representation theory of tensor powers."""

from .core import (
    EigenphaseList,
    PureState,
    UnitaryMatrix,
    eigenphases,
    haar_random_unitary,
    overlap,
    pair_at_distance,
    random_state,
    trace_distance_pure,
    unitary_distance,
)
from .equality import (
    TesterMode,
    UnitaryTestPlan,
    analyze,
    character_ratio,
    plan_for_mode,
    plan_qubit_known,
    plan_qubit_swap,
    plan_qudit,
    run_unitary_test,
    soundness_certificate,
)
from .experiments import (
    ExperimentKind,
    ExperimentReport,
    ExperimentSpec,
    bounds_table,
    build_membership_instance,
    build_unitary_instance,
    generate_state_set,
    run_experiment,
    wilson_interval,
)
from .irreps import (
    Partition,
    StaircasePlan,
    TypeVector,
    dim_symmetric_irrep,
    dim_unitary_irrep,
    staircase_character,
    symmetric_group_character,
    weyl_character,
)
from .membership import (
    Decision,
    MembershipPlan,
    StateSet,
    Verdict,
    chernoff_plan_size,
    chernoff_reject_bound,
    membership_accept_prob,
    plan_l2_membership,
    plan_membership,
    run_membership_test,
)

__version__ = "0.1.0"

__all__ = [
    "Decision",
    "EigenphaseList",
    "ExperimentKind",
    "ExperimentReport",
    "ExperimentSpec",
    "MembershipPlan",
    "Partition",
    "PureState",
    "StaircasePlan",
    "StateSet",
    "TesterMode",
    "TypeVector",
    "UnitaryMatrix",
    "UnitaryTestPlan",
    "Verdict",
    "analyze",
    "bounds_table",
    "build_membership_instance",
    "build_unitary_instance",
    "character_ratio",
    "chernoff_plan_size",
    "chernoff_reject_bound",
    "dim_symmetric_irrep",
    "dim_unitary_irrep",
    "eigenphases",
    "generate_state_set",
    "haar_random_unitary",
    "membership_accept_prob",
    "overlap",
    "pair_at_distance",
    "plan_for_mode",
    "plan_l2_membership",
    "plan_membership",
    "plan_qubit_known",
    "plan_qubit_swap",
    "plan_qudit",
    "random_state",
    "run_experiment",
    "run_membership_test",
    "run_unitary_test",
    "soundness_certificate",
    "staircase_character",
    "symmetric_group_character",
    "trace_distance_pure",
    "unitary_distance",
    "weyl_character",
    "wilson_interval",
]
