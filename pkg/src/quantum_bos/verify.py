"""Randomized property checks shared by the ``verify`` command and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bos_analysis import (
    BosParams,
    EpsilonPair,
    is_valid,
    prediction_consistency,
    quantized_bos,
    risk_sign_product,
)
from .game_theory import Bimatrix2x2, deviation_gains
from .quantum_core import InitialState, MixedStrategyPair, mixed_payoff, oracle_payoff

ORACLE_TOL = 1e-10
PHASE_TOL = 1e-10
SIGN_TOL = 1e-10


@dataclass(frozen=True)
class PropertyResult:
    name: str
    samples: int
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance or (self.tolerance == 0 and self.max_deviation == 0)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<24} {status}  max_dev={self.max_deviation:.3e}  tol={self.tolerance:.0e}  n={self.samples}"


def random_state(rng: np.random.Generator) -> InitialState:
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    z /= np.linalg.norm(z)
    return InitialState(tuple(complex(a) for a in z))


def random_bimatrix(rng: np.random.Generator, bound: float = 10.0) -> Bimatrix2x2:
    return Bimatrix2x2.from_nested(rng.uniform(-bound, bound, size=(2, 2, 2)).tolist())


def random_params(rng: np.random.Generator, bound: float = 10.0) -> BosParams:
    while True:
        g, b, a = sorted(rng.uniform(-bound, bound, size=3).tolist())
        if a > b > g:
            return BosParams(a, b, g)


def random_valid_eps(rng: np.random.Generator, params: BosParams, tie_fraction: float = 0.1) -> EpsilonPair:
    """Rejection-sample a pair inside the validity region; a fraction are exact ties."""
    tied = rng.uniform() < tie_fraction
    while True:
        if tied:
            eps = EpsilonPair(*(2 * [float(rng.uniform(0.0, 0.25))]))
        else:
            e1, e2 = rng.uniform(0.0, 1 / 3, size=2).tolist()
            if e1 == e2:
                continue
            eps = EpsilonPair(e1, e2)
        if is_valid(params, eps):
            return eps


def check_oracle_equivalence(rng: np.random.Generator, n: int) -> PropertyResult:
    worst = 0.0
    for _ in range(n):
        state, game = random_state(rng), random_bimatrix(rng)
        strat = MixedStrategyPair(*rng.uniform(size=2).tolist())
        x, y = mixed_payoff(state, game, strat), oracle_payoff(state, game, strat)
        worst = max(worst, abs(x.a - y.a), abs(x.b - y.b))
    return PropertyResult("oracle_equivalence", n, worst, ORACLE_TOL)


def check_phase_invariance(rng: np.random.Generator, n: int) -> PropertyResult:
    worst = 0.0
    for _ in range(n):
        state, game = random_state(rng), random_bimatrix(rng)
        strat = MixedStrategyPair(*rng.uniform(size=2).tolist())
        shifted = state.with_phases(rng.uniform(0, 2 * math.pi, size=4).tolist())
        for route in (mixed_payoff, oracle_payoff):
            x, y = route(state, game, strat), route(shifted, game, strat)
            worst = max(worst, abs(x.a - y.a), abs(x.b - y.b))
    return PropertyResult("phase_invariance", n, worst, PHASE_TOL)


def check_prediction_consistency(rng: np.random.Generator, n: int) -> PropertyResult:
    mismatches = 0
    for _ in range(n):
        params = random_params(rng)
        if not prediction_consistency(params, random_valid_eps(rng, params)):
            mismatches += 1
    return PropertyResult("prediction_consistency", n, float(mismatches), 0.0)


def sign_product_deviation(params: BosParams, eps: EpsilonPair) -> float:
    """Scale-aware relative gap between the factored product and ``u1*u2 - v1*v2``."""
    u1, v1, u2, v2 = deviation_gains(quantized_bos(params, eps))
    pu, pv = u1 * u2, v1 * v2
    closed = risk_sign_product(params, eps)
    scale = max(abs(closed), abs(pu), abs(pv))
    return 0.0 if scale == 0 else abs(closed - (pu - pv)) / scale


def check_sign_product(rng: np.random.Generator, n: int) -> PropertyResult:
    worst = 0.0
    for _ in range(n):
        params = random_params(rng)
        worst = max(worst, sign_product_deviation(params, random_valid_eps(rng, params)))
    return PropertyResult("sign_product_identity", n, worst, SIGN_TOL)


CHECKS: tuple[Callable[[np.random.Generator, int], PropertyResult], ...] = (
    check_oracle_equivalence,
    check_phase_invariance,
    check_prediction_consistency,
    check_sign_product,
)


def run_all(samples: int, seed: int) -> list[PropertyResult]:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    return [check(rng, samples) for check in CHECKS]
