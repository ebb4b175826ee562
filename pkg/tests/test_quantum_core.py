import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantum_bos.bos_analysis import BosParams, bos_bimatrix, nt_state
from quantum_bos.errors import (
    InvalidDensityMatrix,
    InvalidStrategy,
    NegativeProbability,
    NonFinite,
    NonRealDiagonal,
    NotNormalized,
)
from quantum_bos.game_theory import Bimatrix2x2
from quantum_bos.quantum_core import (
    CLASSICAL_STATE,
    ENTANGLED_STATE,
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
    oracle_payoff,
    payoff_operators,
    trace_payoffs,
)

from conftest import payoffs, unit


def flipped_state_rho(amps, strategies):
    """Independent route: mix the four bit-flipped pure states by reindexing amplitudes."""
    psi = np.array(amps, dtype=complex).reshape(2, 2)
    rho = np.zeros((4, 4), dtype=complex)
    p, q = strategies
    for flip_a, wa in ((0, p), (1, 1 - p)):
        for flip_b, wb in ((0, q), (1, 1 - q)):
            moved = np.empty_like(psi)
            for k in range(2):
                for l in range(2):
                    moved[k ^ flip_a, l ^ flip_b] = psi[k, l]
            v = moved.reshape(4)
            rho += wa * wb * np.outer(v, v.conj())
    return rho


def enumerate_payoff(probs, game, strategies):
    """Sum over outcomes: P(outcome) * payoff of the classical cell the outcome lands on."""
    p, q = strategies
    a = b = 0.0
    for k in range(2):
        for l in range(2):
            for flip_a, wa in ((0, p), (1, 1 - p)):
                for flip_b, wb in ((0, q), (1, 1 - q)):
                    # basis ket |kl> after flipping lands on cell row k', col l'
                    kk, ll = k ^ flip_a, l ^ flip_b
                    cell = game.cells[kk][ll]
                    w = wa * wb * probs[2 * k + l]
                    a += w * cell.a
                    b += w * cell.b
    return a, b


@st.composite
def states(draw):
    re = draw(st.lists(st.floats(-1, 1), min_size=4, max_size=4))
    im = draw(st.lists(st.floats(-1, 1), min_size=4, max_size=4))
    z = np.array(re) + 1j * np.array(im)
    n = np.linalg.norm(z)
    if n < 1e-3:
        z = np.array([1, 0, 0, 0], dtype=complex)
        n = 1.0
    return InitialState(tuple(complex(x) for x in z / n))


@st.composite
def bimatrices(draw):
    vals = draw(st.lists(payoffs, min_size=8, max_size=8))
    return Bimatrix2x2.from_nested(np.array(vals).reshape(2, 2, 2).tolist())


class TestStates:
    def test_basis_state(self):
        s = make_state((1, 0, 0, 0))
        assert s.probabilities == (1.0, 0.0, 0.0, 0.0)

    def test_maximally_entangled(self):
        s = make_state((1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)))
        assert s.probabilities == pytest.approx((0.5, 0, 0, 0.5), abs=1e-15)

    def test_unnormalized_rejected(self):
        with pytest.raises(NotNormalized):
            make_state((1, 1, 0, 0))

    def test_non_finite_rejected(self):
        with pytest.raises(NonFinite):
            make_state((float("nan"), 0, 0, 0))

    def test_from_probs_nt_moduli(self):
        s = make_state_from_probs((5 / 16, 5 / 16, 1 / 16, 5 / 16))
        assert s.probabilities == pytest.approx((5 / 16, 5 / 16, 1 / 16, 5 / 16), abs=1e-15)
        assert all(a.imag == 0 for a in s.amplitudes)

    def test_from_probs_basis(self):
        assert make_state_from_probs((1, 0, 0, 0)).amplitudes == (1, 0, 0, 0)

    def test_from_probs_unnormalized(self):
        with pytest.raises(NotNormalized):
            make_state_from_probs((0.5, 0.5, 0.5, 0.5))

    def test_from_probs_negative(self):
        with pytest.raises(NegativeProbability):
            make_state_from_probs((1.5, -0.5, 0, 0))

    def test_state_is_immutable(self):
        with pytest.raises(AttributeError):
            CLASSICAL_STATE.amplitudes = (0, 1, 0, 0)


class TestDensity:
    def test_basis_projector(self):
        rho = density_of(CLASSICAL_STATE).entries
        expected = np.zeros((4, 4))
        expected[0, 0] = 1
        assert np.array_equal(rho, expected)

    def test_bell_state(self):
        rho = density_of(ENTANGLED_STATE).entries
        for r, c in ((0, 0), (0, 3), (3, 0), (3, 3)):
            assert rho[r, c] == pytest.approx(0.5, abs=1e-15)
        assert np.count_nonzero(np.abs(rho) > 1e-15) == 4

    def test_phases_leave_diagonal(self):
        phased = nt_state().with_phases((0.3, 1.7, -2.0, 4.1))
        rho = density_of(phased)
        # the outer product of the phased state, computed by hand entry by entry
        amps = phased.amplitudes
        for k in range(4):
            assert rho.entries[k, k] == pytest.approx(amps[k] * amps[k].conjugate(), abs=1e-15)
        assert np.real(rho.diagonal) == pytest.approx([5 / 16, 5 / 16, 1 / 16, 5 / 16], abs=1e-15)
        assert np.abs(rho.entries[0, 1]) > 0.1  # coherences survive, only the diagonal matters

    def test_rejects_bad_trace(self):
        with pytest.raises(InvalidDensityMatrix):
            DensityMatrix(np.eye(4))

    def test_rejects_non_hermitian(self):
        m = np.diag([1, 0, 0, 0]).astype(complex)
        m[0, 1] = 0.1
        with pytest.raises(InvalidDensityMatrix):
            DensityMatrix(m)

    def test_matrix_is_read_only(self):
        rho = density_of(CLASSICAL_STATE)
        with pytest.raises(ValueError):
            rho.entries[0, 0] = 0


class TestEvolve:
    def test_identity_action(self):
        out = evolve(density_of(CLASSICAL_STATE), MixedStrategyPair(1, 1))
        assert np.array_equal(out.entries, density_of(CLASSICAL_STATE).entries)

    def test_double_flip(self):
        out = evolve(density_of(CLASSICAL_STATE), MixedStrategyPair(0, 0))
        expected = np.zeros((4, 4))
        expected[3, 3] = 1
        assert np.array_equal(out.entries, expected)

    def test_coin_flips_give_uniform_diagonal(self):
        # pq, p(1-q), (1-p)q, (1-p)(1-q) all 1/4, each landing on a different ket
        out = evolve(density_of(CLASSICAL_STATE), MixedStrategyPair(0.5, 0.5))
        assert np.array_equal(out.entries, np.eye(4) / 4)

    def test_input_not_mutated(self):
        rho = density_of(nt_state())
        before = rho.entries.copy()
        evolve(rho, MixedStrategyPair(0.3, 0.8))
        assert np.array_equal(rho.entries, before)

    def test_invalid_strategy(self):
        with pytest.raises(InvalidStrategy):
            MixedStrategyPair(1.2, 0.5)

    @given(states(), unit, unit)
    @settings(max_examples=200)
    def test_matches_reindexing_oracle(self, state, p, q):
        out = evolve(density_of(state), MixedStrategyPair(p, q)).entries
        assert np.max(np.abs(out - flipped_state_rho(state.amplitudes, (p, q)))) < 1e-12

    @given(states(), unit, unit)
    @settings(max_examples=200)
    def test_trace_and_hermiticity(self, state, p, q):
        out = evolve(density_of(state), MixedStrategyPair(p, q)).entries
        assert abs(np.trace(out) - 1) < 1e-12
        assert np.max(np.abs(out - out.conj().T)) < 1e-12

    @given(states(), st.sampled_from([(0, 0), (0, 1), (1, 0), (1, 1)]))
    def test_pure_profiles_permute_diagonal_exactly(self, state, profile):
        rho = density_of(state)
        out = evolve(rho, MixedStrategyPair.pure(profile))
        i, j = profile
        d = rho.diagonal
        # ket |kl> moves to |k^(1-i), l^(1-j)>
        expected = np.empty(4, dtype=complex)
        for k in range(2):
            for l in range(2):
                expected[2 * (k ^ (1 - i)) + (l ^ (1 - j))] = d[2 * k + l]
        assert np.array_equal(out.diagonal, expected)


class TestPayoffOperators:
    def test_bos(self, game531):
        ops = payoff_operators(game531)
        assert ops.diag_a == (5, 1, 1, 3)
        assert ops.diag_b == (3, 1, 1, 5)

    def test_zero(self):
        ops = payoff_operators(Bimatrix2x2.from_nested([[(0, 0), (0, 0)], [(0, 0), (0, 0)]]))
        assert ops.diag_a == ops.diag_b == (0, 0, 0, 0)

    def test_nt_game(self, bos531):
        # exact rational evaluation of (5a+5b+6g)/16, (5a+b+10g)/16, (a+5b+10g)/16 at (5,3,1)
        a, b, g = (Fraction(x) for x in (5, 3, 1))
        expected = [(5 * a + 5 * b + 6 * g) / 16, (5 * a + b + 10 * g) / 16, (a + 5 * b + 10 * g) / 16,
                    (5 * a + 5 * b + 6 * g) / 16]
        assert [float(x) for x in expected] == [2.875, 2.375, 1.875, 2.875]
        ops = payoff_operators(derived_bimatrix(nt_state(), bos_bimatrix(bos531)))
        assert ops.diag_a == pytest.approx([float(x) for x in expected], abs=1e-12)


class TestTracePayoffs:
    def test_corner(self, game531):
        pay = trace_payoffs(density_of(CLASSICAL_STATE), payoff_operators(game531))
        assert pay.as_tuple() == (5, 3)

    def test_uniform(self, game531):
        pay = trace_payoffs(DensityMatrix(np.eye(4) / 4), payoff_operators(game531))
        assert pay.as_tuple() == pytest.approx((2.5, 2.5), abs=1e-15)

    def test_opposite_corner(self, game531):
        rho = np.zeros((4, 4))
        rho[3, 3] = 1
        assert trace_payoffs(DensityMatrix(rho), payoff_operators(game531)).as_tuple() == (3, 5)

    def test_rejects_complex_diagonal(self, game531):
        # bypass validation to mimic a corrupted matrix
        rho = object.__new__(DensityMatrix)
        m = np.eye(4, dtype=complex) / 4
        m[1, 1] += 1e-9j
        object.__setattr__(rho, "entries", m)
        with pytest.raises(NonRealDiagonal):
            trace_payoffs(rho, payoff_operators(game531))

    def test_operator_pair_rejects_inf(self):
        with pytest.raises(NonFinite):
            PayoffOperatorPair((0, 0, 0, float("inf")), (0, 0, 0, 0))


class TestClosedForm:
    def test_classical(self, game531):
        assert closed_form_payoff(CLASSICAL_STATE, game531, (1, 1)).as_tuple() == (5, 3)

    def test_nt_diagonal(self, game531):
        pay = closed_form_payoff(nt_state(), game531, (1, 1))
        assert pay.as_tuple() == pytest.approx((2.875, 2.875), abs=1e-12)

    def test_eps_state(self, game531):
        state = make_state_from_probs((0.485, 0.01, 0.02, 0.485))
        pay = closed_form_payoff(state, game531, (0, 0))
        assert pay.as_tuple() == pytest.approx((3.91, 3.91), abs=1e-12)

    @given(states(), bimatrices(), unit, unit)
    @settings(max_examples=300)
    def test_mixed_matches_enumeration(self, state, game, p, q):
        pay = mixed_payoff(state, game, MixedStrategyPair(p, q))
        a, b = enumerate_payoff(state.probabilities, game, (p, q))
        assert abs(pay.a - a) < 1e-10 and abs(pay.b - b) < 1e-10


class TestDerivedBimatrix:
    @given(bimatrices())
    def test_classical_state_reproduces_game(self, game):
        derived = derived_bimatrix(CLASSICAL_STATE, game)
        assert np.max(np.abs(np.array(derived.to_nested()) - np.array(game.to_nested()))) <= 1e-12

    def test_nt_symbolic(self):
        a, b, g = 7.5, 2.25, -1.0
        d = derived_bimatrix(nt_state(), bos_bimatrix(BosParams(a, b, g)))
        assert d.payoff(1, 1).as_tuple() == pytest.approx(((5 * a + 5 * b + 6 * g) / 16,) * 2, abs=1e-12)
        assert d.payoff(1, 0).as_tuple() == pytest.approx(
            ((5 * a + b + 10 * g) / 16, (a + 5 * b + 10 * g) / 16), abs=1e-12)
        assert d.payoff(0, 1).as_tuple() == pytest.approx(
            ((a + 5 * b + 10 * g) / 16, (5 * a + b + 10 * g) / 16), abs=1e-12)

    def test_entangled_equalizes_diagonal(self):
        a, b, g = 4.0, 1.5, 0.5
        d = derived_bimatrix(ENTANGLED_STATE, bos_bimatrix(BosParams(a, b, g)))
        for profile in ((1, 1), (0, 0)):
            assert d.payoff(*profile).as_tuple() == pytest.approx(((a + b) / 2,) * 2, abs=1e-12)


class TestMixedPayoff:
    def test_corner_equals_pure(self, game531):
        s = nt_state()
        assert mixed_payoff(s, game531, MixedStrategyPair(1, 1)) == closed_form_payoff(s, game531, (1, 1))

    def test_random_play_classical(self, game531):
        pay = mixed_payoff(CLASSICAL_STATE, game531, MixedStrategyPair(0.5, 0.5))
        assert pay.as_tuple() == pytest.approx((2.5, 2.5), abs=1e-15)

    @given(states(), bimatrices(), unit, unit)
    @settings(max_examples=300)
    def test_oracle_identity(self, state, game, p, q):
        x = mixed_payoff(state, game, MixedStrategyPair(p, q))
        y = oracle_payoff(state, game, MixedStrategyPair(p, q))
        assert abs(x.a - y.a) < 1e-10 and abs(x.b - y.b) < 1e-10

    @given(states(), bimatrices(), unit, unit, st.lists(st.floats(0, 2 * math.pi), min_size=4, max_size=4))
    def test_phase_invariance(self, state, game, p, q, phases):
        s = MixedStrategyPair(p, q)
        x = mixed_payoff(state, game, s)
        y = oracle_payoff(state.with_phases(phases), game, s)
        assert abs(x.a - y.a) < 1e-10 and abs(x.b - y.b) < 1e-10

    @given(states(), bimatrices(), unit, unit)
    def test_affine_in_each_argument(self, state, game, p, q):
        # three points on a line in p (q fixed) must be collinear, and vice versa
        for make in (lambda t: MixedStrategyPair(t, q), lambda t: MixedStrategyPair(p, t)):
            lo, mid, hi = (mixed_payoff(state, game, make(t)) for t in (0.0, 0.5, 1.0))
            assert abs(mid.a - (lo.a + hi.a) / 2) < 1e-10
            assert abs(mid.b - (lo.b + hi.b) / 2) < 1e-10
