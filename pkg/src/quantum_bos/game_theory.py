"""2x2 bimatrix games, Nash equilibria and Harsanyi-Selten selection.

Strategy labels follow one global convention: label 1 is the first
row/column of the bimatrix (the identity operator in the quantum scheme),
label 0 the second.  ``Bimatrix2x2.cells[0][0]`` is therefore profile (1,1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

from .errors import NonFinite, PreconditionViolated

# Relative guard used for strict/weak payoff comparisons.
COMPARISON_TOL = 1e-12


@dataclass(frozen=True)
class PayoffPair:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise NonFinite(f"payoffs must be finite, got ({self.a}, {self.b})")

    def as_tuple(self) -> tuple[float, float]:
        return (self.a, self.b)


class PureProfile(NamedTuple):
    i: int
    j: int

    def __str__(self) -> str:
        return f"({self.i},{self.j})"


@dataclass(frozen=True)
class MixedEquilibrium:
    """Mixed profile; ``s1``/``s2`` are the weights on strategy label 1."""

    s1: float
    s2: float

    def __post_init__(self):
        for s in (self.s1, self.s2):
            if not (0.0 <= s <= 1.0):
                raise PreconditionViolated(f"mixed weight {s} outside [0, 1]")

    def __str__(self) -> str:
        return f"mixed({self.s1:.6g},{self.s2:.6g})"


Equilibrium = Union[PureProfile, MixedEquilibrium]


def _tol(*values: float) -> float:
    return COMPARISON_TOL * max(abs(v) for v in values)


def _row(i: int) -> int:
    if i not in (0, 1):
        raise ValueError(f"strategy label must be 0 or 1, got {i!r}")
    return 1 - i


@dataclass(frozen=True)
class Bimatrix2x2:
    cells: tuple[tuple[PayoffPair, PayoffPair], tuple[PayoffPair, PayoffPair]]

    @classmethod
    def from_nested(cls, rows: Sequence[Sequence[Sequence[float]]]) -> "Bimatrix2x2":
        """Build from ``[[(a, b), (a, b)], [(a, b), (a, b)]]`` in matrix layout."""
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("bimatrix must be 2x2")
        cells = []
        for r in rows:
            row = []
            for c in r:
                if len(c) != 2:
                    raise ValueError("each cell must be a payoff pair")
                row.append(PayoffPair(float(c[0]), float(c[1])))
            cells.append(tuple(row))
        return cls(tuple(cells))

    @classmethod
    def from_payoffs(cls, payoffs: dict) -> "Bimatrix2x2":
        """Build from a mapping ``{(i, j): (a, b)}`` keyed by strategy labels."""
        rows = [[None, None], [None, None]]
        for (i, j), pair in payoffs.items():
            rows[_row(i)][_row(j)] = pair
        return cls.from_nested(rows)

    def payoff(self, i: int, j: int) -> PayoffPair:
        return self.cells[_row(i)][_row(j)]

    def to_nested(self) -> list[list[list[float]]]:
        return [[[c.a, c.b] for c in row] for row in self.cells]

    def transformed(self, c: float, d: float) -> "Bimatrix2x2":
        """Apply the affine map ``x -> c*x + d`` to every payoff of both players."""
        return Bimatrix2x2.from_nested([[(c * p.a + d, c * p.b + d) for p in row] for row in self.cells])

    def __str__(self) -> str:
        fmt = lambda p: f"({p.a:.6g}, {p.b:.6g})"
        return "\n".join("[" + "  ".join(fmt(p) for p in row) + "]" for row in self.cells)


def relabel(game: Bimatrix2x2, player_a: bool = True, player_b: bool = True) -> Bimatrix2x2:
    """Swap strategy labels 1 <-> 0 for the chosen players.

    Relabeling a single player moves anti-diagonal equilibria onto the
    diagonal, which is the only case the selection algorithm accepts.
    """
    rows = game.to_nested()
    if player_a:
        rows = rows[::-1]
    if player_b:
        rows = [r[::-1] for r in rows]
    return Bimatrix2x2.from_nested(rows)


def deviation_gains(game: Bimatrix2x2) -> tuple[float, float, float, float]:
    """Return ``(u1, v1, u2, v2)``.

    ``u1 = a11 - a21``, ``v1 = a22 - a12``, ``u2 = b11 - b12``,
    ``v2 = b22 - b21`` with indices in matrix position.
    """
    (c11, c12), (c21, c22) = game.cells
    return (c11.a - c21.a, c22.a - c12.a, c11.b - c12.b, c22.b - c21.b)


# --------------------------------------------------------------------------
# Equilibria
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PureEquilibrium:
    profile: PureProfile
    payoffs: PayoffPair
    strong: bool


@dataclass(frozen=True)
class EquilibriumSet:
    pure: tuple[PureEquilibrium, ...]
    mixed: Optional[MixedEquilibrium] = None
    mixed_payoffs: Optional[PayoffPair] = None

    def profiles(self) -> list[PureProfile]:
        return [e.profile for e in self.pure]

    def candidates(self) -> list[tuple[Equilibrium, PayoffPair]]:
        out: list[tuple[Equilibrium, PayoffPair]] = [(e.profile, e.payoffs) for e in self.pure]
        if self.mixed is not None:
            out.append((self.mixed, self.mixed_payoffs))
        return out


def pure_equilibria(game: Bimatrix2x2) -> list[tuple[PureProfile, bool]]:
    """Enumerate pure Nash equilibria with a strongness flag.

    Ordering follows matrix layout: (1,1), (1,0), (0,1), (0,0).
    """
    found = []
    for i in (1, 0):
        for j in (1, 0):
            here = game.payoff(i, j)
            dev_a = game.payoff(1 - i, j).a
            dev_b = game.payoff(i, 1 - j).b
            gain_a = here.a - dev_a
            gain_b = here.b - dev_b
            tol_a = _tol(here.a, dev_a)
            tol_b = _tol(here.b, dev_b)
            if gain_a >= -tol_a and gain_b >= -tol_b:
                found.append((PureProfile(i, j), gain_a > tol_a and gain_b > tol_b))
    return found


def has_strong_diagonal(game: Bimatrix2x2) -> bool:
    strong = {p for p, s in pure_equilibria(game) if s}
    return PureProfile(1, 1) in strong and PureProfile(0, 0) in strong


def mixed_equilibrium(game: Bimatrix2x2) -> MixedEquilibrium:
    """Interior equilibrium ``(v2/(u2+v2), v1/(u1+v1))`` of a diagonal coordination game."""
    if not has_strong_diagonal(game):
        raise PreconditionViolated("(1,1) and (0,0) must both be strong equilibria")
    u1, v1, u2, v2 = deviation_gains(game)
    return MixedEquilibrium(v2 / (u2 + v2), v1 / (u1 + v1))


def equilibrium_payoffs(game: Bimatrix2x2, eq: Equilibrium) -> PayoffPair:
    if isinstance(eq, MixedEquilibrium):
        s1, s2 = eq.s1, eq.s2
        a = b = 0.0
        for i, wi in ((1, s1), (0, 1.0 - s1)):
            for j, wj in ((1, s2), (0, 1.0 - s2)):
                cell = game.payoff(i, j)
                a += wi * wj * cell.a
                b += wi * wj * cell.b
        return PayoffPair(a, b)
    return game.payoff(*eq)


def find_equilibria(game: Bimatrix2x2) -> EquilibriumSet:
    """Pure equilibria plus the interior one when the diagonal pattern holds."""
    pure = tuple(
        PureEquilibrium(p, game.payoff(*p), strong) for p, strong in pure_equilibria(game)
    )
    if has_strong_diagonal(game):
        mixed = mixed_equilibrium(game)
        return EquilibriumSet(pure, mixed, equilibrium_payoffs(game, mixed))
    return EquilibriumSet(pure)


def _pareto_dominates(x: PayoffPair, y: PayoffPair) -> bool:
    ge_a = x.a >= y.a - _tol(x.a, y.a)
    ge_b = x.b >= y.b - _tol(x.b, y.b)
    strict = x.a > y.a + _tol(x.a, y.a) or x.b > y.b + _tol(x.b, y.b)
    return ge_a and ge_b and strict


def payoff_dominant(game: Bimatrix2x2, eqs: EquilibriumSet) -> Optional[Equilibrium]:
    """The equilibrium that Pareto-dominates every other one, if any.

    Ties (two equilibria with equal payoffs for both players) yield None.
    """
    cands = eqs.candidates()
    for k, (eq, pay) in enumerate(cands):
        if all(_pareto_dominates(pay, other) for m, (_, other) in enumerate(cands) if m != k):
            return eq
    return None


# --------------------------------------------------------------------------
# Harsanyi-Selten selection
# --------------------------------------------------------------------------

PAYOFF_DOMINANCE = "payoff-dominance"
RISK_DOMINANCE = "risk-dominance"
MIXED_TIE = "mixed-tie"


@dataclass(frozen=True)
class RiskDominanceCertificate:
    u1: float
    v1: float
    u2: float
    v2: float
    product_u: float
    product_v: float
    selection: Equilibrium
    selected_by: str
    equilibria: EquilibriumSet
    notes: tuple[str, ...] = field(default=())

    @property
    def label(self) -> str:
        """Short label: ``(1,1)``, ``(0,0)``, ``(1,0)``, ``(0,1)`` or ``mixed``."""
        if isinstance(self.selection, MixedEquilibrium):
            return "mixed"
        return str(self.selection)


def _has_weak_tie(eqs: EquilibriumSet) -> bool:
    cands = eqs.candidates()
    for k in range(len(cands)):
        for m in range(k + 1, len(cands)):
            x, y = cands[k][1], cands[m][1]
            if abs(x.a - y.a) <= _tol(x.a, y.a) and abs(x.b - y.b) <= _tol(x.b, y.b):
                return True
    return False


def harsanyi_selten_select(game: Bimatrix2x2) -> RiskDominanceCertificate:
    """Select one of the three equilibria of a game with two strong diagonal equilibria.

    Payoff dominance is tried first over all three equilibria.  Otherwise
    ``u1*u2`` is compared with ``v1*v2`` using a tolerance of 1e-12 relative
    to the larger product; a tie selects the mixed equilibrium.
    """
    if not has_strong_diagonal(game):
        raise PreconditionViolated(
            "selection requires strong equilibria at (1,1) and (0,0); relabel anti-diagonal games first"
        )
    eqs = find_equilibria(game)
    u1, v1, u2, v2 = deviation_gains(game)
    pu, pv = u1 * u2, v1 * v2
    notes = []

    dominant = payoff_dominant(game, eqs)
    if dominant is not None:
        selection, by = dominant, PAYOFF_DOMINANCE
    else:
        if _has_weak_tie(eqs):
            notes.append("two equilibria tie in payoffs for both players; no payoff-dominant equilibrium")
        if abs(pu - pv) <= _tol(pu, pv):
            selection, by = eqs.mixed, MIXED_TIE
        elif pu > pv:
            selection, by = PureProfile(1, 1), RISK_DOMINANCE
        else:
            selection, by = PureProfile(0, 0), RISK_DOMINANCE
    return RiskDominanceCertificate(u1, v1, u2, v2, pu, pv, selection, by, eqs, tuple(notes))
