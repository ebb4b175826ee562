"""Battle of the Sexes under the Marinatto-Weber scheme.

The analysed family of initial states has ``|a00|^2 = |a11|^2 = (1 - s)/2``,
``|a01|^2 = eps1``, ``|a10|^2 = eps2`` with ``s = eps1 + eps2``.  Inside the
validity region the quantized game keeps the two diagonal strong equilibria,
both players are paid equally at every equilibrium, and risk dominance picks
(1,1), (0,0) or the (1/2, 1/2) mixture according to the sign of
``eps1 - eps2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InvalidDelta, InvalidEpsilon, InvalidGrid, OrderingViolated, PreconditionViolated
from .game_theory import (
    Bimatrix2x2,
    MixedEquilibrium,
    PayoffPair,
    RiskDominanceCertificate,
    equilibrium_payoffs,
    find_equilibria,
    harsanyi_selten_select,
    pure_equilibria,
)
from .quantum_core import (
    ENTANGLED_STATE,
    CLASSICAL_STATE,
    InitialState,
    MixedStrategyPair,
    derived_bimatrix,
    make_state_from_probs,
    mixed_payoff,
)

SYMMETRY_TOL = 1e-10
TIE_TOL = 1e-12
# Best-response margins below this fraction of the payoff scale count as degenerate.
MARGIN_GUARD = 1e-10


@dataclass(frozen=True)
class BosParams:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, float(getattr(self, name)))
        vals = (self.alpha, self.beta, self.gamma)
        if not all(math.isfinite(v) for v in vals):
            raise OrderingViolated(f"payoffs must be finite: {vals}")
        if not (self.alpha > self.beta > self.gamma):
            raise OrderingViolated(f"need alpha > beta > gamma, got {vals}")

    @property
    def spread(self) -> float:
        """``alpha + beta - 2*gamma``."""
        return self.alpha + self.beta - 2 * self.gamma


@dataclass(frozen=True)
class EpsilonPair:
    eps1: float
    eps2: float

    def __post_init__(self):
        object.__setattr__(self, "eps1", float(self.eps1))
        object.__setattr__(self, "eps2", float(self.eps2))
        e1, e2 = self.eps1, self.eps2
        if not (math.isfinite(e1) and math.isfinite(e2)):
            raise InvalidEpsilon(f"epsilons must be finite: ({e1}, {e2})")
        if e1 < 0 or e2 < 0 or e1 + e2 > 1:
            raise InvalidEpsilon(f"need eps1, eps2 >= 0 and eps1 + eps2 <= 1, got ({e1}, {e2})")

    @property
    def total(self) -> float:
        return self.eps1 + self.eps2

    @property
    def tied(self) -> bool:
        return self.eps1 == self.eps2

    def swapped(self) -> "EpsilonPair":
        return EpsilonPair(self.eps2, self.eps1)


def bos_bimatrix(params: BosParams) -> Bimatrix2x2:
    al, be, ga = params.alpha, params.beta, params.gamma
    return Bimatrix2x2.from_nested([[(al, be), (ga, ga)], [(ga, ga), (be, al)]])


def nt_bimatrix(params: BosParams, scale: float = 1 / 16) -> Bimatrix2x2:
    """Quantized game of the (5,5,1,5)/16 state written out symbolically.

    ``scale=1`` gives the integer-coefficient table (16 times the game).
    """
    al, be, ga = params.alpha, params.beta, params.gamma
    diag = scale * (5 * al + 5 * be + 6 * ga)
    return Bimatrix2x2.from_nested(
        [
            [(diag, diag), (scale * (5 * al + be + 10 * ga), scale * (al + 5 * be + 10 * ga))],
            [(scale * (al + 5 * be + 10 * ga), scale * (5 * al + be + 10 * ga)), (diag, diag)],
        ]
    )


def epsilon_state(eps: EpsilonPair) -> InitialState:
    if not isinstance(eps, EpsilonPair):
        eps = EpsilonPair(*eps)
    edge = 0.5 * (1 - eps.total)
    return make_state_from_probs((edge, eps.eps1, eps.eps2, edge))


def nt_state() -> InitialState:
    return make_state_from_probs((5 / 16, 5 / 16, 1 / 16, 5 / 16))


def quantized_bos(params: BosParams, eps: EpsilonPair) -> Bimatrix2x2:
    return derived_bimatrix(epsilon_state(eps), bos_bimatrix(params))


# --------------------------------------------------------------------------
# Validity region
# --------------------------------------------------------------------------

def condition_holds(eps: EpsilonPair) -> tuple[bool, str]:
    """Region test on (eps1, eps2) alone; returns ``(ok, branch)``."""
    if eps.tied:
        return eps.eps1 < 0.25, "eps < 1/4"
    bound = 1 - 2 * max(eps.eps1, eps.eps2)
    return eps.total <= bound + TIE_TOL, "eps1 + eps2 <= 1 - 2 max(eps1, eps2)"


def best_response_margins(params: BosParams, eps: EpsilonPair) -> tuple[float, float]:
    """Closed forms of ``pi(1,1) - pi(0,1)`` and ``pi(0,0) - pi(1,0)`` for player A.

    These equal ``u1 = u2`` and ``v1 = v2`` of the quantized game.
    """
    edge = 0.5 * (1 - eps.total)
    hi = params.alpha - params.gamma
    lo = params.beta - params.gamma
    return hi * (edge - eps.eps2) + lo * (edge - eps.eps1), hi * (edge - eps.eps1) + lo * (edge - eps.eps2)


def _margin_floor(params: BosParams) -> float:
    return MARGIN_GUARD * max(abs(params.alpha), abs(params.beta), abs(params.gamma))


def is_valid(params: BosParams, eps: EpsilonPair) -> bool:
    """Region condition plus strictly positive margins (beyond rounding)."""
    floor = _margin_floor(params)
    return condition_holds(eps)[0] and all(m > floor for m in best_response_margins(params, eps))


@dataclass(frozen=True)
class LemmaReport:
    valid: bool
    condition_checked: str
    condition_holds: bool
    ineq2_value: float
    ineq3_value: float
    equilibria_preserved: bool
    payoffs_symmetric: bool
    reasons: tuple[str, ...] = field(default=())


def lemma_check(params: BosParams, eps: EpsilonPair) -> LemmaReport:
    ok, branch = condition_holds(eps)
    ineq2, ineq3 = best_response_margins(params, eps)
    floor = _margin_floor(params)
    reasons = []
    if not ok:
        reasons.append(f"condition {branch} fails for ({eps.eps1}, {eps.eps2})")
    if ineq2 <= floor:
        reasons.append(f"(1,1) margin {ineq2!r} is not positive")
    if ineq3 <= floor:
        reasons.append(f"(0,0) margin {ineq3!r} is not positive")

    game = quantized_bos(params, eps)
    classical = {p for p, strong in pure_equilibria(bos_bimatrix(params)) if strong}
    found = pure_equilibria(game)
    preserved = {p for p, _ in found} == classical and all(strong for _, strong in found)
    if not preserved:
        reasons.append("pure equilibria of the quantized game differ from the classical ones")

    symmetric = False
    if preserved:
        eqs = find_equilibria(game)
        symmetric = all(abs(pay.a - pay.b) <= SYMMETRY_TOL for _, pay in eqs.candidates())
        if not symmetric:
            reasons.append("players are paid differently at some equilibrium")

    valid = ok and ineq2 > floor and ineq3 > floor
    return LemmaReport(valid, branch, ok, ineq2, ineq3, preserved, symmetric, tuple(reasons))


def _require_valid(params: BosParams, eps: EpsilonPair) -> None:
    if not is_valid(params, eps):
        raise PreconditionViolated(f"({eps.eps1}, {eps.eps2}) is outside the validity region")


# --------------------------------------------------------------------------
# Selection rule and payoffs
# --------------------------------------------------------------------------

def risk_sign_product(params: BosParams, eps: EpsilonPair) -> float:
    """``(alpha+beta-2gamma)(alpha-beta)(1-2(eps1+eps2))(eps1-eps2)``, equal to ``u1*u2 - v1*v2``."""
    _require_valid(params, eps)
    return params.spread * (params.alpha - params.beta) * (1 - 2 * eps.total) * (eps.eps1 - eps.eps2)


def adjusted_tie_value(params: BosParams, eps: float) -> float:
    """Tied-case formula with an eps correction, ``(alpha+beta+2gamma)/4 - eps*gamma/2``.

    Reported for comparison only.  Bilinear evaluation at (1/2, 1/2) gives
    ``(alpha+beta+2gamma)/4`` for every eps, so the two differ once eps > 0.
    """
    return 0.25 * params.spread + params.gamma - 0.5 * eps * params.gamma


@dataclass(frozen=True)
class TheoremPrediction:
    predicted: str
    sign_product: float
    payoff_value: float
    adjusted_tie_value: Optional[float] = None

    @property
    def tie_discrepancy(self) -> Optional[float]:
        if self.adjusted_tie_value is None:
            return None
        return self.adjusted_tie_value - self.payoff_value


def theorem_prediction(params: BosParams, eps: EpsilonPair) -> TheoremPrediction:
    product = risk_sign_product(params, eps)
    u, v = best_response_margins(params, eps)
    tol = TIE_TOL * max(u * u, v * v)
    if abs(product) <= tol:
        pay = mixed_payoff(epsilon_state(eps), bos_bimatrix(params), MixedStrategyPair(0.5, 0.5))
        alt = adjusted_tie_value(params, eps.eps1) if eps.tied else None
        return TheoremPrediction("mixed", product, pay.a, alt)
    value = 0.5 * ((params.alpha + params.beta) - params.spread * eps.total)
    return TheoremPrediction("(1,1)" if product > 0 else "(0,0)", product, value)


def select(params: BosParams, eps: EpsilonPair) -> RiskDominanceCertificate:
    _require_valid(params, eps)
    return harsanyi_selten_select(quantized_bos(params, eps))


def selected_payoff(params: BosParams, eps: EpsilonPair) -> PayoffPair:
    """Payoffs at the equilibrium chosen by Harsanyi-Selten on the quantized game."""
    cert = select(params, eps)
    return equilibrium_payoffs(quantized_bos(params, eps), cert.selection)


def prediction_consistency(params: BosParams, eps: EpsilonPair) -> bool:
    pred = theorem_prediction(params, eps)
    cert = select(params, eps)
    if pred.predicted == "mixed":
        sel = cert.selection
        return (
            isinstance(sel, MixedEquilibrium)
            and abs(sel.s1 - 0.5) <= SYMMETRY_TOL
            and abs(sel.s2 - 0.5) <= SYMMETRY_TOL
        )
    return cert.label == pred.predicted


def supremum_gap(params: BosParams, delta: float) -> EpsilonPair:
    """Unequal pair ``(t, 2t)`` whose equilibrium payoff is within ``delta`` of ``(alpha+beta)/2``."""
    ceiling = 0.5 * (params.alpha + params.beta)
    if not (0 < delta < ceiling - params.gamma):
        raise InvalidDelta(f"delta must lie in (0, {ceiling - params.gamma}), got {delta}")
    t = min(delta / (3 * params.spread), 0.01)
    return EpsilonPair(t, 2 * t)


# --------------------------------------------------------------------------
# Baselines
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BaselineComparison:
    classical_random: float
    entangled_random: float
    nt_payoff: float
    eps_payoff: float

    @property
    def values(self) -> tuple[float, float, float, float]:
        return (self.classical_random, self.entangled_random, self.nt_payoff, self.eps_payoff)

    @property
    def ordered(self) -> bool:
        """``eps_payoff > nt_payoff > entangled_random`` (random baselines coincide)."""
        return self.eps_payoff > self.nt_payoff > self.entangled_random


def baseline_comparison(params: BosParams, eps: EpsilonPair) -> BaselineComparison:
    game = bos_bimatrix(params)
    coin = MixedStrategyPair(0.5, 0.5)
    classical = mixed_payoff(CLASSICAL_STATE, game, coin)
    entangled = mixed_payoff(ENTANGLED_STATE, game, coin)
    nt_game = derived_bimatrix(nt_state(), game)
    nt = equilibrium_payoffs(nt_game, harsanyi_selten_select(nt_game).selection)
    mine = selected_payoff(params, eps)
    return BaselineComparison(classical.a, entangled.a, nt.a, mine.a)


# --------------------------------------------------------------------------
# Sweeps
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRecord:
    eps1: float
    eps2: float
    selected: str
    payoff_a: float
    payoff_b: float
    lemma_valid: bool
    sign_product: float


def grid_axis(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive arithmetic grid; empty when ``hi < lo``."""
    if not all(math.isfinite(x) for x in (lo, hi, step)):
        raise InvalidGrid("grid bounds must be finite")
    if step <= 0:
        raise InvalidGrid(f"step must be positive, got {step}")
    if not (0 <= lo <= 1 and 0 <= hi <= 1):
        raise InvalidGrid(f"grid bounds must lie in [0, 1], got [{lo}, {hi}]")
    if hi < lo:
        return []
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 15) for k in range(n)]


def evaluate_point(params: BosParams, eps1: float, eps2: float) -> SweepRecord:
    nan = float("nan")
    try:
        eps = EpsilonPair(eps1, eps2)
    except InvalidEpsilon:
        return SweepRecord(eps1, eps2, "n/a", nan, nan, False, nan)
    if not is_valid(params, eps):
        return SweepRecord(eps1, eps2, "n/a", nan, nan, False, nan)
    cert = select(params, eps)
    pay = equilibrium_payoffs(quantized_bos(params, eps), cert.selection)
    return SweepRecord(eps1, eps2, cert.label, pay.a, pay.b, True, risk_sign_product(params, eps))


def sweep(params: BosParams, eps1_values: Iterable[float], eps2_values: Sequence[float]) -> list[SweepRecord]:
    """Evaluate every grid point, eps1-major order."""
    eps2_values = list(eps2_values)
    for v in eps2_values:
        if not (0 <= v <= 1):
            raise InvalidGrid(f"grid value {v} outside [0, 1]")
    records = []
    for e1 in eps1_values:
        if not (0 <= e1 <= 1):
            raise InvalidGrid(f"grid value {e1} outside [0, 1]")
        records.extend(evaluate_point(params, e1, e2) for e2 in eps2_values)
    return records
