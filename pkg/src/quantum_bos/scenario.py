"""Scenario documents (JSON) describing a game, an initial state or a sweep.

Example::

    {"bos": {"alpha": 5, "beta": 3, "gamma": 1}, "epsilons": [0.01, 0.02]}

Exactly one game key (``bos`` or ``bimatrix``) and exactly one of
``amplitudes``, ``probs``, ``epsilons``, ``preset`` or ``sweep``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .bos_analysis import BosParams, EpsilonPair, bos_bimatrix, epsilon_state, grid_axis, nt_state
from .errors import GameError
from .game_theory import Bimatrix2x2
from .quantum_core import CLASSICAL_STATE, ENTANGLED_STATE, InitialState, make_state, make_state_from_probs

GAME_KEYS = ("bos", "bimatrix")
STATE_KEYS = ("amplitudes", "probs", "epsilons", "preset", "sweep")
PRESETS = ("classical", "entangled", "nt")


class ScenarioError(ValueError):
    """Malformed or invalid scenario; message names the offending line or field."""


@dataclass(frozen=True)
class AxisSpec:
    min: float
    max: float
    step: float

    def values(self) -> list[float]:
        return grid_axis(self.min, self.max, self.step)


@dataclass(frozen=True)
class Scenario:
    bos: Optional[BosParams] = None
    bimatrix: Optional[Bimatrix2x2] = None
    state_kind: str = ""
    state_value: Any = None
    sweep: Optional[tuple[AxisSpec, AxisSpec]] = None

    @property
    def game(self) -> Bimatrix2x2:
        if self.bos is not None:
            return bos_bimatrix(self.bos)
        return self.bimatrix

    @property
    def epsilons(self) -> Optional[EpsilonPair]:
        if self.state_kind == "epsilons":
            return EpsilonPair(*self.state_value)
        return None

    def state(self) -> InitialState:
        kind, value = self.state_kind, self.state_value
        if kind == "amplitudes":
            return make_state([complex(re, im) for re, im in value])
        if kind == "probs":
            return make_state_from_probs(value)
        if kind == "epsilons":
            return epsilon_state(EpsilonPair(*value))
        if kind == "preset":
            return {"classical": CLASSICAL_STATE, "entangled": ENTANGLED_STATE, "nt": nt_state()}[value]
        raise ScenarioError("scenario has no initial state (sweep scenarios describe a grid)")

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {}
        if self.bos is not None:
            doc["bos"] = {"alpha": self.bos.alpha, "beta": self.bos.beta, "gamma": self.bos.gamma}
        else:
            doc["bimatrix"] = self.bimatrix.to_nested()
        if self.sweep is not None:
            doc["sweep"] = {
                name: {"min": ax.min, "max": ax.max, "step": ax.step} for name, ax in zip(("eps1", "eps2"), self.sweep)
            }
        elif self.state_kind == "amplitudes":
            doc["amplitudes"] = [list(a) for a in self.state_value]
        elif self.state_kind in ("probs", "epsilons"):
            doc[self.state_kind] = list(self.state_value)
        else:
            doc["preset"] = self.state_value
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"field '{where}': expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(f"field '{where}': number must be finite")
    return float(value)


def _numbers(value: Any, n: int, where: str) -> tuple[float, ...]:
    if not isinstance(value, list) or len(value) != n:
        raise ScenarioError(f"field '{where}': expected a list of {n} numbers")
    return tuple(_number(v, f"{where}[{k}]") for k, v in enumerate(value))


def _parse_bos(value: Any) -> BosParams:
    if isinstance(value, list):
        vals = _numbers(value, 3, "bos")
    elif isinstance(value, dict):
        extra = set(value) - {"alpha", "beta", "gamma"}
        if extra:
            raise ScenarioError(f"field 'bos': unknown keys {sorted(extra)}")
        try:
            vals = tuple(_number(value[k], f"bos.{k}") for k in ("alpha", "beta", "gamma"))
        except KeyError as exc:
            raise ScenarioError(f"field 'bos': missing {exc.args[0]!r}") from None
    else:
        raise ScenarioError("field 'bos': expected {alpha, beta, gamma} or [alpha, beta, gamma]")
    try:
        return BosParams(*vals)
    except GameError as exc:
        raise ScenarioError(f"field 'bos': {exc}") from None


def _parse_bimatrix(value: Any) -> Bimatrix2x2:
    if not isinstance(value, list) or len(value) != 2:
        raise ScenarioError("field 'bimatrix': expected 2 rows")
    rows = []
    for r, row in enumerate(value):
        if not isinstance(row, list) or len(row) != 2:
            raise ScenarioError(f"field 'bimatrix[{r}]': expected 2 cells")
        rows.append([_numbers(cell, 2, f"bimatrix[{r}][{c}]") for c, cell in enumerate(row)])
    return Bimatrix2x2.from_nested(rows)


def _parse_axis(value: Any, where: str) -> AxisSpec:
    if not isinstance(value, dict) or set(value) != {"min", "max", "step"}:
        raise ScenarioError(f"field '{where}': expected {{min, max, step}}")
    axis = AxisSpec(*(_number(value[k], f"{where}.{k}") for k in ("min", "max", "step")))
    try:
        axis.values()
    except GameError as exc:
        raise ScenarioError(f"field '{where}': {exc}") from None
    return axis


def from_dict(doc: Any) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(doc) - set(GAME_KEYS) - set(STATE_KEYS)
    if unknown:
        raise ScenarioError(f"unknown fields {sorted(unknown)}")
    games = [k for k in GAME_KEYS if k in doc]
    states = [k for k in STATE_KEYS if k in doc]
    if len(games) != 1:
        raise ScenarioError(f"need exactly one of {GAME_KEYS}, found {games}")
    if len(states) != 1:
        raise ScenarioError(f"need exactly one of {STATE_KEYS}, found {states}")

    bos = _parse_bos(doc["bos"]) if "bos" in doc else None
    bimatrix = _parse_bimatrix(doc["bimatrix"]) if "bimatrix" in doc else None
    kind = states[0]
    value = doc[kind]

    if kind == "sweep":
        if not isinstance(value, dict) or set(value) != {"eps1", "eps2"}:
            raise ScenarioError("field 'sweep': expected {eps1: {...}, eps2: {...}}")
        axes = (_parse_axis(value["eps1"], "sweep.eps1"), _parse_axis(value["eps2"], "sweep.eps2"))
        return Scenario(bos, bimatrix, kind, None, axes)

    if kind == "amplitudes":
        if not isinstance(value, list) or len(value) != 4:
            raise ScenarioError("field 'amplitudes': expected four [re, im] pairs")
        value = tuple(_numbers(a, 2, f"amplitudes[{k}]") for k, a in enumerate(value))
    elif kind == "probs":
        value = _numbers(value, 4, "probs")
    elif kind == "epsilons":
        value = _numbers(value, 2, "epsilons")
    elif value not in PRESETS:
        raise ScenarioError(f"field 'preset': expected one of {PRESETS}, got {value!r}")

    scenario = Scenario(bos, bimatrix, kind, value)
    try:
        scenario.state()
    except GameError as exc:
        raise ScenarioError(f"field '{kind}': {exc}") from None
    return scenario


def loads(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(doc)


def load(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)
