"""Decision making under ambiguity for finite-outcome stateless problems.

The package models belief states as finite sets of scaled measures with
reward offsets, evaluates policies by their worst-case expected return over
that set, and updates the whole set on each observation. With a single
hypothesis the machinery reduces exactly to Bayesian conditioning, so the
classical agent is the one-point special case of the robust one.
"""

from .agents import (
    AgentState,
    Policy,
    PolicyGrid,
    act,
    bayes_select,
    deterministic_grid,
    ib_observe,
    make_agent,
    policy_grid,
    policy_value,
    select_policy,
)
from .environments import (
    KU_MODES,
    KUBanditConfig,
    NewcombEnvConfig,
    TrapWorldConfig,
    TrueWorld,
    bernoulli_step,
    expected_regret,
    ku_probabilities,
    ku_step,
    newcomb_policy_rewards,
    newcomb_step,
    trap_expected_rewards,
    trap_sample_world,
    trap_step,
)
from .errors import (
    ConfigError,
    ContractViolationError,
    DegenerateUpdateError,
    IBRLError,
    RepresentationError,
)
from .inframeasure import (
    AMeasure,
    Infradistribution,
    argmin_point,
    evaluate,
    lower_expectation,
    mix_classical,
    mix_knightian,
    prune,
)
from .updates import condition, raw_update, renormalize, update_infra
from .worldmodels import (
    BanditHistory,
    BernoulliArmMeasure,
    BernoulliArmsModel,
    ExplicitFiniteModel,
    FiniteOutcomeMeasure,
    JointHypothesisBanditModel,
    JointHypothesisMeasure,
    NewcombModel,
    ObservationEvent,
    OutcomeCountHistory,
    ReturnFunction,
    Restriction,
    STATELESS,
    StatelessMeasure,
    WorldModel,
    branch_probability,
    log_branch_probability,
    mix_measures,
    newcomb_expected_reward,
    newcomb_prediction_prob,
    observe,
    predictive,
)

__version__ = "0.1.0"

__all__ = [
    "AMeasure",
    "AgentState",
    "BanditHistory",
    "BernoulliArmMeasure",
    "BernoulliArmsModel",
    "ConfigError",
    "ContractViolationError",
    "DegenerateUpdateError",
    "ExplicitFiniteModel",
    "FiniteOutcomeMeasure",
    "IBRLError",
    "Infradistribution",
    "JointHypothesisBanditModel",
    "JointHypothesisMeasure",
    "KU_MODES",
    "KUBanditConfig",
    "NewcombEnvConfig",
    "NewcombModel",
    "ObservationEvent",
    "OutcomeCountHistory",
    "Policy",
    "PolicyGrid",
    "RepresentationError",
    "Restriction",
    "ReturnFunction",
    "STATELESS",
    "StatelessMeasure",
    "TrapWorldConfig",
    "TrueWorld",
    "WorldModel",
    "act",
    "argmin_point",
    "bayes_select",
    "bernoulli_step",
    "branch_probability",
    "condition",
    "deterministic_grid",
    "evaluate",
    "expected_regret",
    "ib_observe",
    "ku_probabilities",
    "ku_step",
    "log_branch_probability",
    "lower_expectation",
    "make_agent",
    "mix_classical",
    "mix_knightian",
    "mix_measures",
    "newcomb_expected_reward",
    "newcomb_policy_rewards",
    "newcomb_prediction_prob",
    "newcomb_step",
    "observe",
    "policy_grid",
    "policy_value",
    "predictive",
    "prune",
    "raw_update",
    "renormalize",
    "select_policy",
    "trap_expected_rewards",
    "trap_sample_world",
    "trap_step",
    "update_infra",
]
