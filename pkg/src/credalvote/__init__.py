"""Strategic plurality voting under belief-function uncertainty.

Voters hold beliefs about the score vector as mass functions over sets of
outcomes, evaluate single ballot moves through a decision rule (pessimistic,
pignistic, a mixture, or Hurwicz), and move one at a time under round-robin
scheduling until an equilibrium, a cycle, or a step limit.
"""
from .election import (
    BallotProfile,
    CandidateSet,
    PartialPreference,
    Preference,
    Score,
    TieBreakOrder,
    apply_move,
    linear_extensions,
    plurality_winner,
    possible_tops,
    rank_utility,
    scores_from_profile,
    validate_score,
)
from .uncertainty import (
    DEFAULT_CAP,
    L1_ADDREMOVE,
    METRICS,
    NESTED,
    PARTITIONED,
    VOTER_SWAP,
    ExpansionCapError,
    FocalElement,
    LayeredBelief,
    MassFunction,
    NeighborhoodSpec,
    ScoreDistribution,
    classify,
    layered_to_mass,
    lower_expectation,
    lower_probability,
    multinomial_distribution,
    neighborhood,
    pignistic,
    product_mass,
    upper_expectation,
    upper_probability,
)
from .decision import (
    CARDINAL_RANK,
    DIRECT_BEST_RESPONSE,
    HURWICZ,
    MEIR_SIGN,
    MIXTURE,
    NOT_PREFERRED,
    PESSIMISTIC,
    PIGNISTIC,
    RULE_KINDS,
    STRICTLY_PREFERRED,
    UTILITY_MODELS,
    WEAKLY_PREFERRED,
    DecisionRule,
    MoveEvaluation,
    completion_scores,
    dominating_manipulation,
    evaluate_move,
    move_utility,
    pignistic_cardinal,
)
from .dynamics import (
    CONVERGED,
    CYCLE,
    DEFAULT_MAX_STEPS,
    STEP_LIMIT,
    BeliefTemplate,
    CampaignSummary,
    GameState,
    MoveRecord,
    RunOutcome,
    RunSetup,
    VoterConfig,
    campaign,
    default_policy,
    equilibrium_check,
    run,
    step,
    truthful_profile,
)
from .scenario import (
    ASSERTING_FAMILIES,
    FAMILIES,
    FORMAT_VERSION,
    HURWICZ_ALPHAS,
    MEIR_R0,
    PIGNISTIC_UNIFORM,
    THEOREM1_NESTED,
    THEOREM1_PARTITIONED,
    THEOREM2_HURWICZ,
    Scenario,
    ScenarioError,
    TraceRecord,
    emit_scenario,
    emit_trace,
    family_setup,
    fixture_text,
    generate_instance,
    parse_scenario,
    parse_trace,
    scenario_to_setup,
    summary_csv,
    trace_record,
)
from . import oracles

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
