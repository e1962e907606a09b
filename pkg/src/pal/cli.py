"""Command-line front end.

Every command prints one JSON document on stdout and a one-line human
summary on stderr.  Exit codes: 0 ok, 2 parse error, 3 invalid model,
4 precondition violated, 5 internal defect (or a Validated-mode
disagreement in ``verify``).
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
import time
from typing import Optional, Sequence

from pal.classify import RuleSet, Status, classify
from pal.formula import Atom, agents as formula_agents, to_nnf, UnsupportedNegation
from pal.generate import single_terms
from pal.kripke import KripkeModel, ModelError, restrict, truth_set
from pal.oracle import (
    PreconditionViolated,
    SearchBounds,
    SearchError,
    TooLarge,
    WitnessDefect,
    check_supermodel_preservation,
    find_satisfying_model,
    find_selfref_counterexample,
    find_success_counterexample,
    is_self_refuting_on,
    is_successful_on,
    is_super_successful_on,
    refutes_success,
)
from pal.parser import SourceError, parse, render


class ExitStatus(enum.IntEnum):
    OK = 0
    PARSE_ERROR = 2
    INVALID_MODEL = 3
    PRECONDITION = 4
    DEFECT = 5


class _Fail(Exception):
    def __init__(self, status: ExitStatus, payload: dict):
        self.status = status
        self.payload = payload


def _emit(doc: dict, summary: str, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
    if summary:
        err.write(summary + "\n")


def _formula(text: str):
    try:
        return parse(text)
    except SourceError as exc:
        raise _Fail(
            ExitStatus.PARSE_ERROR,
            {"error": "parse", "position": exc.position, "expected": exc.expected, "input": text},
        ) from exc


def _model(path: str) -> KripkeModel:
    try:
        return KripkeModel.load(path)
    except ModelError as exc:
        violations = [str(v) for v in getattr(exc, "violations", [])] or [str(exc)]
        raise _Fail(ExitStatus.INVALID_MODEL, {"error": "invalid-model", "path": path, "violations": violations}) from exc
    except OSError as exc:
        raise _Fail(ExitStatus.INVALID_MODEL, {"error": "invalid-model", "path": path, "violations": [str(exc)]}) from exc


def _sorted_worlds(m: KripkeModel, ws):
    return [w for w in m.worlds if w in ws]


# -- commands -----------------------------------------------------------------


def cmd_parse(args):
    f = _formula(args.formula)
    if args.nnf:
        try:
            f = to_nnf(f)
        except UnsupportedNegation as exc:
            raise _Fail(ExitStatus.PRECONDITION, {"error": "precondition", "message": str(exc)}) from exc
    text = render(f)
    return {"formula": text, "nnf": bool(args.nnf)}, text


def cmd_eval(args):
    m = _model(args.model)
    f = _formula(args.formula)
    sat = truth_set(m, f)
    doc = {"formula": render(f), "truth_set": _sorted_worlds(m, sat)}
    world = args.world or m.designated
    if world is not None:
        if world not in m.world_set:
            raise _Fail(ExitStatus.INVALID_MODEL, {"error": "invalid-model", "violations": [f"unknown world {world!r}"]})
        doc = {"world": world, "value": world in sat, **doc}
        return doc, f"{world} |= {render(f)}: {str(world in sat).lower()}"
    return doc, f"{render(f)} holds at {len(sat)} of {len(m.worlds)} worlds"


def cmd_announce(args):
    m = _model(args.model)
    f = _formula(args.formula)
    after = restrict(m, f)
    deleted = [w for w in m.worlds if w not in after.world_set]
    doc = {"formula": render(f), "kept": list(after.worlds), "deleted": deleted, "empty": not after.worlds}
    if args.out:
        after.save(args.out)
        doc["out"] = args.out
    else:
        doc["model"] = after.to_dict()
    summary = f"deleted {len(deleted)} of {len(m.worlds)} worlds"
    if not after.worlds:
        summary += "; the announcement was false everywhere, the restricted model is EMPTY"
    return doc, summary


def cmd_classify(args):
    f = _formula(args.formula)
    v = classify(f, RuleSet(args.rules))
    doc = {"formula": render(f), "rules": args.rules, **v.to_dict()}
    if v.witness_recipe is not None and not args.no_witness:
        try:
            pm = v.witness_recipe.build()
        except LookupError as exc:
            doc["witness"] = None
            doc["witness_error"] = str(exc)
        else:
            if not refutes_success(pm, f):
                raise _Fail(ExitStatus.DEFECT, {"error": "defect", "message": f"witness for {render(f)} does not verify"})
            doc["witness"] = pm.to_dict()
    label = v.status.value + (f" ({v.rule.id})" if v.rule else "")
    if v.disputed:
        label += ", disputed"
    return doc, label


def cmd_check(args):
    m = _model(args.model)
    f = _formula(args.formula)
    sat = truth_set(m, f)
    doc = {
        "formula": render(f),
        "truth_set": _sorted_worlds(m, sat),
        "after": _sorted_worlds(m, truth_set(m.submodel(sat), f)),
        "successful": is_successful_on(m, f),
        "self_refuting": is_self_refuting_on(m, f),
    }
    try:
        doc["super_successful"] = is_super_successful_on(m, f)
    except TooLarge as exc:
        doc["super_successful"] = None
        doc["note"] = str(exc)
    return doc, f"successful={doc['successful']} super_successful={doc['super_successful']}"


_SEARCHES = {
    "success": find_success_counterexample,
    "self-refutation": find_selfref_counterexample,
    "satisfiability": find_satisfying_model,
    "supermodel": check_supermodel_preservation,
}


def _bounds(args, f) -> SearchBounds:
    ags = args.agents.split(",") if args.agents else sorted(formula_agents(f))
    return SearchBounds(
        max_worlds=args.max_worlds,
        agents=tuple(a for a in ags if a) or ("a",),
        strategy=args.strategy,
        samples=args.samples,
        seed=args.seed,
    )


def cmd_search(args):
    f = _formula(args.formula)
    report = _SEARCHES[args.kind](f, _bounds(args, f))
    doc = report.to_dict(stable=args.stable)
    summary = f"{report.outcome} after {report.models_examined} models"
    if report.found:
        summary += f" ({len(report.witness.model.worlds)}-world witness at {report.witness.point})"
    return doc, summary


# -- verify -------------------------------------------------------------------


def oracle_agrees(f, verdict, max_worlds: int) -> dict:
    """Check one definite verdict against the oracle; returns a small record."""
    bounds = SearchBounds(max_worlds, tuple(sorted(formula_agents(f))))
    if verdict.status is Status.SUCCESSFUL:
        r = find_success_counterexample(f, bounds)
        return {"agrees": not r.found, "oracle": r.outcome, "witness": r.witness.to_dict() if r.found else None}
    if verdict.witness_recipe is not None:
        try:
            pm = verdict.witness_recipe.build()
        except (LookupError, PreconditionViolated):
            pm = None
        if pm is not None and refutes_success(pm, f):
            return {"agrees": True, "oracle": "WitnessVerified"}
    r = find_success_counterexample(f, bounds)
    return {"agrees": r.found, "oracle": r.outcome}


def run_verify(max_ops: int, n_agents: int, max_worlds: int, rules: str, min_ops: int = 1) -> dict:
    """Classify every single term over ``1..n_agents`` with body ``p`` and cross-check it."""
    ags = [str(i) for i in range(1, n_agents + 1)]
    rs = RuleSet(rules)
    counts = {"Successful": 0, "Unsuccessful": 0, "Unknown": 0}
    agreements = 0
    disagreements = []
    unknown = []
    total = 0
    for view in single_terms(max_ops, ags, Atom("p"), min_ops=min_ops):
        total += 1
        f = view.formula
        v = classify(f, rs)
        counts[v.status.value] += 1
        if v.status is Status.UNKNOWN:
            unknown.append(render(f))
            continue
        rec = oracle_agrees(f, v, max_worlds)
        if rec["agrees"]:
            agreements += 1
        else:
            disagreements.append(
                {
                    "formula": render(f),
                    "verdict": v.status.value,
                    "rule_id": v.rule.id if v.rule else None,
                    "disputed": v.disputed,
                    "oracle": rec["oracle"],
                    "witness": rec.get("witness"),
                }
            )
    return {
        "max_ops": max_ops,
        "agents": ags,
        "max_worlds": max_worlds,
        "rules": rs.value,
        "formulas": total,
        "verdicts": counts,
        "agreements": agreements,
        "disagreements": disagreements,
        "unknown": unknown,
    }


def cmd_verify(args):
    t0 = time.perf_counter()
    doc = run_verify(args.max_ops, args.agents, args.max_worlds, args.rules)
    if not args.stable:
        doc["elapsed"] = round(time.perf_counter() - t0, 6)
    summary = (
        f"{doc['formulas']} formulas: {doc['agreements']} agree, "
        f"{len(doc['disagreements'])} disagree, {doc['verdicts']['Unknown']} unknown"
    )
    if doc["disagreements"] and RuleSet(args.rules) is RuleSet.VALIDATED:
        raise _Fail(ExitStatus.DEFECT, {"error": "disagreement", **doc})
    return doc, summary


# -- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pal", description="Public announcement logic: evaluation, search and success classification.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and re-render a formula")
    p.add_argument("formula")
    p.add_argument("--nnf", action="store_true", help="print the negation normal form")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="evaluate a formula on a model file")
    p.add_argument("model")
    p.add_argument("formula")
    p.add_argument("--world", help="world to evaluate at (default: the designated world)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("announce", help="restrict a model to the worlds satisfying a formula")
    p.add_argument("model")
    p.add_argument("formula")
    p.add_argument("--out", help="write the restricted model here instead of stdout")
    p.set_defaults(func=cmd_announce)

    p = sub.add_parser("classify", help="syntactic success verdict with rule provenance")
    p.add_argument("formula")
    p.add_argument("--rules", choices=[r.value for r in RuleSet], default="validated")
    p.add_argument("--no-witness", action="store_true", help="do not materialize counter-models")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", help="success, self-refutation and super-success on one model")
    p.add_argument("model")
    p.add_argument("formula")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", help="bounded counter-model search")
    p.add_argument("formula")
    p.add_argument("--kind", choices=sorted(_SEARCHES), default="success")
    p.add_argument("--max-worlds", type=int, default=4)
    p.add_argument("--strategy", choices=["exhaustive", "chain", "random-tree"], default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--agents", help="comma-separated agents (default: those in the formula)")
    p.add_argument("--stable", action="store_true", help="omit timing fields")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="cross-check the classifier against the oracle on all short single terms")
    p.add_argument("--max-ops", type=int, default=3)
    p.add_argument("--agents", type=int, default=2)
    p.add_argument("--max-worlds", type=int, default=4)
    p.add_argument("--rules", choices=[r.value for r in RuleSet], default="validated")
    p.add_argument("--stable", action="store_true", help="omit timing fields")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, summary = args.func(args)
    except _Fail as exc:
        _emit(exc.payload, f"error: {exc.payload.get('error')}", out, err)
        return int(exc.status)
    except (PreconditionViolated, SearchError, TooLarge) as exc:
        _emit({"error": "precondition", "message": str(exc)}, f"error: {exc}", out, err)
        return int(ExitStatus.PRECONDITION)
    except WitnessDefect as exc:
        _emit({"error": "defect", "message": str(exc)}, f"error: {exc}", out, err)
        return int(ExitStatus.DEFECT)
    _emit(doc, summary, out, err)
    return int(ExitStatus.OK)


if __name__ == "__main__":
    sys.exit(main())
