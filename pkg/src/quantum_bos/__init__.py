"""Marinatto-Weber quantum 2x2 games and Battle of the Sexes equilibrium selection."""

from .bos_analysis import (
    BaselineComparison,
    BosParams,
    EpsilonPair,
    LemmaReport,
    SweepRecord,
    TheoremPrediction,
    baseline_comparison,
    bos_bimatrix,
    epsilon_state,
    lemma_check,
    nt_bimatrix,
    nt_state,
    prediction_consistency,
    risk_sign_product,
    supremum_gap,
    sweep,
    theorem_prediction,
)
from .game_theory import (
    Bimatrix2x2,
    EquilibriumSet,
    MixedEquilibrium,
    PayoffPair,
    PureProfile,
    RiskDominanceCertificate,
    equilibrium_payoffs,
    harsanyi_selten_select,
    mixed_equilibrium,
    payoff_dominant,
    pure_equilibria,
)
from .quantum_core import (
    DensityMatrix,
    InitialState,
    MixedStrategyPair,
    PayoffOperatorPair,
    closed_form_payoff,
    density_of,
    derived_bimatrix,
    evolve,
    make_state,
    make_state_from_probs,
    mixed_payoff,
    payoff_operators,
    trace_payoffs,
)

__version__ = "0.1.0"
