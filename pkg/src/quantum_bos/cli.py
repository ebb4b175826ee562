"""Command-line front end: ``analyze``, ``sweep``, ``verify``, ``compare``.

Exit codes: 0 success, 1 bad input, 2 failed internal consistency check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Optional

from . import bos_analysis as bos
from . import verify as verify_mod
from .errors import GameError
from .game_theory import (
    EquilibriumSet,
    MixedEquilibrium,
    RiskDominanceCertificate,
    equilibrium_payoffs,
    find_equilibria,
    harsanyi_selten_select,
)
from .quantum_core import derived_bimatrix, oracle_bimatrix
from .scenario import Scenario, ScenarioError, load

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY = 0, 1, 2
ORACLE_TOL = 1e-10
SWEEP_COLUMNS = ("eps1", "eps2", "lemma_valid", "selection", "payoff_a", "payoff_b", "sign_product")


class ConsistencyError(RuntimeError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _equilibria_doc(eqs: EquilibriumSet) -> dict:
    doc: dict[str, Any] = {
        "pure": [
            {"profile": [e.profile.i, e.profile.j], "strong": e.strong, "payoffs": list(e.payoffs.as_tuple())}
            for e in eqs.pure
        ],
        "mixed": None,
    }
    if eqs.mixed is not None:
        doc["mixed"] = {"s1": eqs.mixed.s1, "s2": eqs.mixed.s2, "payoffs": list(eqs.mixed_payoffs.as_tuple())}
    return doc


def _certificate_doc(cert: RiskDominanceCertificate, game) -> dict:
    sel = cert.selection
    return {
        "u1": cert.u1,
        "v1": cert.v1,
        "u2": cert.u2,
        "v2": cert.v2,
        "product_u": cert.product_u,
        "product_v": cert.product_v,
        "selection": cert.label,
        "selection_detail": [sel.s1, sel.s2] if isinstance(sel, MixedEquilibrium) else [sel.i, sel.j],
        "selected_by": cert.selected_by,
        "payoffs": list(equilibrium_payoffs(game, sel).as_tuple()),
        "notes": list(cert.notes),
    }


def build_report(scenario: Scenario) -> dict:
    """Run the full pipeline for a state scenario; raises ConsistencyError on oracle mismatch."""
    state = scenario.state()
    game = scenario.game
    derived = derived_bimatrix(state, game)
    oracle = oracle_bimatrix(state, game)
    deviation = max(
        abs(x - y)
        for rx, ry in zip(derived.to_nested(), oracle.to_nested())
        for cx, cy in zip(rx, ry)
        for x, y in zip(cx, cy)
    )
    eqs = find_equilibria(derived)
    report: dict[str, Any] = {
        "scenario": scenario.to_dict(),
        "state_probabilities": list(state.probabilities),
        "derived_bimatrix": derived.to_nested(),
        "oracle_max_deviation": deviation,
        "equilibria": _equilibria_doc(eqs),
        "certificate": None,
    }
    if deviation > ORACLE_TOL:
        raise ConsistencyError(f"closed form and density-matrix payoffs differ by {deviation:.3e}")

    try:
        cert = harsanyi_selten_select(derived)
    except GameError as exc:
        report["certificate_unavailable"] = str(exc)
    else:
        report["certificate"] = _certificate_doc(cert, derived)
        if not any(_same(cert.selection, eq) for eq, _ in eqs.candidates()):
            raise ConsistencyError("selected equilibrium is not in the equilibrium set")

    eps = scenario.epsilons
    if scenario.bos is not None and eps is not None:
        params = scenario.bos
        lemma = bos.lemma_check(params, eps)
        report["lemma"] = {
            "valid": lemma.valid,
            "condition": lemma.condition_checked,
            "condition_holds": lemma.condition_holds,
            "ineq2_value": lemma.ineq2_value,
            "ineq3_value": lemma.ineq3_value,
            "equilibria_preserved": lemma.equilibria_preserved,
            "payoffs_symmetric": lemma.payoffs_symmetric,
            "reasons": list(lemma.reasons),
        }
        if lemma.valid:
            pred = bos.theorem_prediction(params, eps)
            consistent = bos.prediction_consistency(params, eps)
            report["theorem"] = {
                "predicted": pred.predicted,
                "sign_product": pred.sign_product,
                "payoff_value": pred.payoff_value,
                "adjusted_tie_value": pred.adjusted_tie_value,
                "tie_discrepancy": pred.tie_discrepancy,
                "consistent": consistent,
            }
            cmp = bos.baseline_comparison(params, eps)
            report["baselines"] = _baseline_doc(cmp)
            if not consistent:
                raise ConsistencyError("rule prediction disagrees with Harsanyi-Selten selection")
    return report


def _same(a, b) -> bool:
    if isinstance(a, MixedEquilibrium) and isinstance(b, MixedEquilibrium):
        return abs(a.s1 - b.s1) < 1e-12 and abs(a.s2 - b.s2) < 1e-12
    return a == b


def _baseline_doc(cmp: bos.BaselineComparison) -> dict:
    return {
        "classical_random": cmp.classical_random,
        "entangled_random": cmp.entangled_random,
        "nt_payoff": cmp.nt_payoff,
        "eps_payoff": cmp.eps_payoff,
        "ordered": cmp.ordered,
    }


def render_report(report: dict) -> str:
    lines = []
    lines.append("scenario: " + json.dumps(report["scenario"], sort_keys=True))
    lines.append("state |a|^2: " + ", ".join(f"{p:.12g}" for p in report["state_probabilities"]))
    lines.append("derived bimatrix (rows/cols: strategy 1, strategy 0):")
    for row in report["derived_bimatrix"]:
        lines.append("  [" + "  ".join(f"({a:.12g}, {b:.12g})" for a, b in row) + "]")
    lines.append(f"oracle max deviation: {report['oracle_max_deviation']:.3e}")
    lines.append("equilibria:")
    for e in report["equilibria"]["pure"]:
        i, j = e["profile"]
        a, b = e["payoffs"]
        lines.append(f"  ({i},{j}) {'strong' if e['strong'] else 'weak'}  payoffs ({a:.12g}, {b:.12g})")
    mixed = report["equilibria"]["mixed"]
    if mixed:
        a, b = mixed["payoffs"]
        lines.append(f"  mixed ({mixed['s1']:.12g}, {mixed['s2']:.12g})  payoffs ({a:.12g}, {b:.12g})")
    cert = report["certificate"]
    if cert is None:
        lines.append("selection: unavailable (" + report.get("certificate_unavailable", "") + ")")
    else:
        lines.append(
            f"selection: {cert['selection']} by {cert['selected_by']}  "
            f"payoffs ({cert['payoffs'][0]:.12g}, {cert['payoffs'][1]:.12g})"
        )
        lines.append(
            f"  u1={cert['u1']:.12g} v1={cert['v1']:.12g} u2={cert['u2']:.12g} v2={cert['v2']:.12g}  "
            f"u1*u2={cert['product_u']:.12g} v1*v2={cert['product_v']:.12g}"
        )
        for note in cert["notes"]:
            lines.append(f"  note: {note}")
    if "lemma" in report:
        lem = report["lemma"]
        lines.append(
            f"lemma: {'valid' if lem['valid'] else 'invalid'} [{lem['condition']}]  "
            f"ineq2={lem['ineq2_value']:.12g} ineq3={lem['ineq3_value']:.12g}  "
            f"equilibria_preserved={lem['equilibria_preserved']} payoffs_symmetric={lem['payoffs_symmetric']}"
        )
        for r in lem["reasons"]:
            lines.append(f"  reason: {r}")
    if "theorem" in report:
        th = report["theorem"]
        lines.append(
            f"rule prediction: {th['predicted']}  sign_product={th['sign_product']:.12g}  "
            f"payoff={th['payoff_value']:.12g}  consistent={th['consistent']}"
        )
        if th["adjusted_tie_value"] is not None:
            flag = "DISCREPANCY" if abs(th["tie_discrepancy"]) > 1e-12 else "agrees"
            lines.append(
                f"  eps-adjusted tie formula: {th['adjusted_tie_value']:.12g} vs bilinear "
                f"{th['payoff_value']:.12g} ({flag})"
            )
    if "baselines" in report:
        lines.append(render_baselines(report["baselines"]))
    return "\n".join(lines)


def render_baselines(doc: dict) -> str:
    rows = [
        ("classical random play", doc["classical_random"]),
        ("entangled random play", doc["entangled_random"]),
        ("Nawaz-Toor equilibrium", doc["nt_payoff"]),
        ("epsilon-state equilibrium", doc["eps_payoff"]),
    ]
    lines = ["baselines:"]
    lines += [f"  {name:<26} {value:.12g}" for name, value in rows]
    lines.append(f"  ordering eps > NT > random: {'yes' if doc['ordered'] else 'no'}")
    return "\n".join(lines)


def sweep_csv(scenario: Scenario) -> str:
    if scenario.sweep is None or scenario.bos is None:
        raise ScenarioError("sweep needs a 'bos' game and a 'sweep' spec")
    ax1, ax2 = scenario.sweep
    records = bos.sweep(scenario.bos, ax1.values(), ax2.values())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for r in records:
        writer.writerow(
            [_fmt(r.eps1), _fmt(r.eps2), str(r.lemma_valid).lower(), r.selected,
             _fmt(r.payoff_a), _fmt(r.payoff_b), _fmt(r.sign_product)]
        )
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def cmd_analyze(args) -> int:
    scenario = load(args.scenario)
    if scenario.sweep is not None:
        raise ScenarioError("analyze needs an initial state, not a sweep spec (use 'sweep')")
    try:
        report = build_report(scenario)
    except ConsistencyError as exc:
        print(f"consistency check failed: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    _emit(_dump(report) if args.format == "machine" else render_report(report), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = load(args.scenario)
    try:
        text = sweep_csv(scenario)
    except GameError as exc:
        raise ScenarioError(str(exc)) from None
    _emit(text, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    scenario = load(args.scenario)
    eps = scenario.epsilons
    if scenario.bos is None or eps is None:
        raise ScenarioError("compare needs a 'bos' game with an 'epsilons' state")
    try:
        cmp = bos.baseline_comparison(scenario.bos, eps)
    except GameError as exc:
        raise ScenarioError(f"field 'epsilons': {exc}") from None
    doc = _baseline_doc(cmp)
    _emit(_dump(doc) if args.format == "machine" else render_baselines(doc), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise ScenarioError("--samples must be >= 1")
    results = verify_mod.run_all(args.samples, args.seed)
    if args.format == "machine":
        text = _dump(
            [
                {"name": r.name, "passed": r.passed, "max_deviation": r.max_deviation,
                 "tolerance": r.tolerance, "samples": r.samples}
                for r in results
            ]
        )
    else:
        text = "\n".join([f"seed={args.seed} samples={args.samples}"] + [r.line() for r in results])
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CONSISTENCY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quantum-bos", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=True):
        if scenario:
            p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        if scenario:
            p.add_argument("--echo", action="store_true", help="print the normalized scenario and exit")

    common(sub.add_parser("analyze", help="full pipeline for one initial state"))
    common(sub.add_parser("sweep", help="evaluate an epsilon grid to CSV"))
    common(sub.add_parser("compare", help="baseline comparison table"))
    p = sub.add_parser("verify", help="randomized property checks")
    common(p, scenario=False)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    return parser


COMMANDS = {"analyze": cmd_analyze, "sweep": cmd_sweep, "compare": cmd_compare, "verify": cmd_verify}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "echo", False):
            _emit(load(args.scenario).dumps(), args.out)
            return EXIT_OK
        return COMMANDS[args.command](args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
