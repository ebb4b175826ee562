"""Marinatto-Weber quantization of 2x2 games.

Two routes to the same payoffs are provided.  The explicit route builds the
4x4 density matrix, applies the mixture of ``I`` and ``C = sigma_x`` on each
qubit and takes ``Tr(P rho_fin)``.  The closed-form route weights the
classical payoff table with the squared amplitude moduli directly.  The
first exists mainly to check the second.

Basis order is (|00>, |01>, |10>, |11>).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InvalidDensityMatrix,
    InvalidStrategy,
    NegativeProbability,
    NonFinite,
    NonRealDiagonal,
    NotNormalized,
)
from .game_theory import Bimatrix2x2, PayoffPair, PureProfile

NORM_TOL = 1e-9
ALGEBRAIC_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
FLIP = np.array([[0, 1], [1, 0]], dtype=complex)


@dataclass(frozen=True)
class InitialState:
    """Two-qubit pure state ``a00|00> + a01|01> + a10|10> + a11|11>``."""

    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amplitudes)
        if len(amps) != 4:
            raise ValueError("a two-qubit state needs four amplitudes")
        if not all(math.isfinite(a.real) and math.isfinite(a.imag) for a in amps):
            raise NonFinite(f"amplitudes must be finite: {amps}")
        norm = sum(abs(a) ** 2 for a in amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"sum of |a|^2 is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probabilities(self) -> tuple[float, float, float, float]:
        return tuple(abs(a) ** 2 for a in self.amplitudes)

    def prob(self, k: int, l: int) -> float:
        """``|a_kl|^2`` with ``k``, ``l`` taken modulo 2."""
        return abs(self.amplitudes[2 * (k % 2) + (l % 2)]) ** 2

    def with_phases(self, phases: Sequence[float]) -> "InitialState":
        return InitialState(tuple(a * complex(math.cos(t), math.sin(t)) for a, t in zip(self.amplitudes, phases)))


def make_state(amplitudes: Sequence[complex]) -> InitialState:
    return InitialState(tuple(amplitudes))


def make_state_from_probs(probs: Sequence[float]) -> InitialState:
    """State with amplitudes ``sqrt(probs)`` and zero phases."""
    probs = tuple(float(p) for p in probs)
    if len(probs) != 4:
        raise ValueError("need four probabilities")
    if not all(math.isfinite(p) for p in probs):
        raise NonFinite(f"probabilities must be finite: {probs}")
    if any(p < 0 for p in probs):
        raise NegativeProbability(f"negative probability in {probs}")
    total = sum(probs)
    if abs(total - 1.0) > NORM_TOL:
        raise NotNormalized(f"probabilities sum to {total!r}, expected 1")
    return InitialState(tuple(complex(math.sqrt(p)) for p in probs))


CLASSICAL_STATE = make_state((1, 0, 0, 0))
ENTANGLED_STATE = make_state((1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)))


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidDensityMatrix(f"expected 4x4, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NonFinite("density matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > ALGEBRAIC_TOL:
            raise InvalidDensityMatrix("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > ALGEBRAIC_TOL:
            raise InvalidDensityMatrix(f"trace is {np.trace(m)}, expected 1")
        if np.any(np.diag(m).real < -ALGEBRAIC_TOL):
            raise InvalidDensityMatrix("negative diagonal entry")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries)


@dataclass(frozen=True)
class MixedStrategyPair:
    """``p``/``q``: probability that player A/B applies the identity."""

    p: float
    q: float

    def __post_init__(self):
        for name, v in (("p", self.p), ("q", self.q)):
            if not (0.0 <= v <= 1.0):
                raise InvalidStrategy(f"{name}={v} outside [0, 1]")

    @classmethod
    def pure(cls, profile: tuple[int, int]) -> "MixedStrategyPair":
        i, j = profile
        return cls(float(i), float(j))


@dataclass(frozen=True)
class PayoffOperatorPair:
    diag_a: tuple[float, float, float, float]
    diag_b: tuple[float, float, float, float]

    def __post_init__(self):
        if not all(math.isfinite(x) for x in self.diag_a + self.diag_b):
            raise NonFinite("payoff operator entries must be finite")

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return np.diag(np.array(self.diag_a, dtype=complex)), np.diag(np.array(self.diag_b, dtype=complex))


def density_of(state: InitialState) -> DensityMatrix:
    psi = np.array(state.amplitudes, dtype=complex)
    return DensityMatrix(np.outer(psi, psi.conj()))


_CONJUGATIONS = {
    (1, 1): np.kron(IDENTITY, IDENTITY),
    (1, 0): np.kron(IDENTITY, FLIP),
    (0, 1): np.kron(FLIP, IDENTITY),
    (0, 0): np.kron(FLIP, FLIP),
}


def evolve(rho_in: DensityMatrix, strategies: MixedStrategyPair) -> DensityMatrix:
    """Apply ``pI + (1-p)C`` on qubit A and ``qI + (1-q)C`` on qubit B."""
    p, q = strategies.p, strategies.q
    weights = {(1, 1): p * q, (1, 0): p * (1 - q), (0, 1): (1 - p) * q, (0, 0): (1 - p) * (1 - q)}
    rho = rho_in.entries
    out = np.zeros((4, 4), dtype=complex)
    for key, w in weights.items():
        if w == 0.0:
            continue
        u = _CONJUGATIONS[key]
        out = out + w * (u @ rho @ u.conj().T)
    return DensityMatrix(out)


def payoff_operators(game: Bimatrix2x2) -> PayoffOperatorPair:
    (c11, c12), (c21, c22) = game.cells
    return PayoffOperatorPair((c11.a, c12.a, c21.a, c22.a), (c11.b, c12.b, c21.b, c22.b))


def trace_payoffs(rho_fin: DensityMatrix, ops: PayoffOperatorPair) -> PayoffPair:
    diag = rho_fin.diagonal
    if np.max(np.abs(diag.imag)) >= ALGEBRAIC_TOL:
        raise NonRealDiagonal(f"diagonal imaginary residue {np.max(np.abs(diag.imag)):.3e}")
    d = diag.real
    return PayoffPair(float(np.dot(ops.diag_a, d)), float(np.dot(ops.diag_b, d)))


def profile_weights(state: InitialState, profile: tuple[int, int]) -> tuple[float, float, float, float]:
    """Row vector weighting ``(x11, x12, x21, x22)`` for a pure profile."""
    i, j = profile
    return (
        state.prob(i + 1, j + 1),
        state.prob(i + 1, j),
        state.prob(i, j + 1),
        state.prob(i, j),
    )


def closed_form_payoff(state: InitialState, game: Bimatrix2x2, profile: tuple[int, int]) -> PayoffPair:
    """Payoff pair of pure profile ``(i, j)`` in the quantized game."""
    w = profile_weights(state, profile)
    ops = payoff_operators(game)
    a = sum(wk * xk for wk, xk in zip(w, ops.diag_a))
    b = sum(wk * yk for wk, yk in zip(w, ops.diag_b))
    return PayoffPair(a, b)


def derived_bimatrix(state: InitialState, game: Bimatrix2x2) -> Bimatrix2x2:
    return Bimatrix2x2.from_payoffs(
        {(i, j): closed_form_payoff(state, game, (i, j)).as_tuple() for i in (1, 0) for j in (1, 0)}
    )


def mixed_payoff(state: InitialState, game: Bimatrix2x2, strategies: MixedStrategyPair) -> PayoffPair:
    p, q = strategies.p, strategies.q
    a = b = 0.0
    for (i, j), w in (((1, 1), p * q), ((1, 0), p * (1 - q)), ((0, 1), (1 - p) * q), ((0, 0), (1 - p) * (1 - q))):
        pay = closed_form_payoff(state, game, (i, j))
        a += w * pay.a
        b += w * pay.b
    return PayoffPair(a, b)


def oracle_payoff(state: InitialState, game: Bimatrix2x2, strategies: MixedStrategyPair) -> PayoffPair:
    """Density-matrix route: ``Tr(P rho_fin)`` for both players."""
    return trace_payoffs(evolve(density_of(state), strategies), payoff_operators(game))


def oracle_bimatrix(state: InitialState, game: Bimatrix2x2) -> Bimatrix2x2:
    return Bimatrix2x2.from_payoffs(
        {
            (i, j): oracle_payoff(state, game, MixedStrategyPair.pure((i, j))).as_tuple()
            for i in (1, 0)
            for j in (1, 0)
        }
    )


__all__ = [
    "CLASSICAL_STATE",
    "ENTANGLED_STATE",
    "DensityMatrix",
    "InitialState",
    "MixedStrategyPair",
    "PayoffOperatorPair",
    "PureProfile",
    "closed_form_payoff",
    "density_of",
    "derived_bimatrix",
    "evolve",
    "make_state",
    "make_state_from_probs",
    "mixed_payoff",
    "oracle_bimatrix",
    "oracle_payoff",
    "payoff_operators",
    "profile_weights",
    "trace_payoffs",
]
