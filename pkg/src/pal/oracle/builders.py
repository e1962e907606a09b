"""Hand-built counter-models for the constructive unsuccessfulness proofs.

Every builder checks its own output with the reference evaluator: the
formula must hold at the point and fail there after it is announced.
"""

from __future__ import annotations

from typing import Dict, Sequence

from pal.formula import (
    And,
    Formula,
    Not,
    Poss,
    SingleTermView,
    atoms,
    find_assignment,
    is_contingent,
    prop_entails,
    prop_sat,
    shape_of,
    KL_SIMPLE,
)
from pal.kripke import KripkeModel, PointedModel, truth_set
from pal.oracle.search import PreconditionViolated, WitnessDefect


class NonContingentBody(PreconditionViolated):
    pass


def _valuation(names, assignment_by_world: Dict[str, dict]):
    val = {p: [] for p in sorted(names)}
    for w, asg in assignment_by_world.items():
        for p in val:
            if asg.get(p, False):
                val[p].append(w)
    return val


def refutes_success(pm: PointedModel, f: Formula) -> bool:
    sat = truth_set(pm.model, f)
    return pm.point in sat and pm.point not in truth_set(pm.model.submodel(sat), f)


def _checked(pm: PointedModel, f: Formula) -> PointedModel:
    if not refutes_success(pm, f):
        raise WitnessDefect(f"constructed model does not refute success of {f}")
    return pm


def build_klsimple_countermodel(v: SingleTermView) -> PointedModel:
    """Four-world chain w1 -a- w2 -b- w3 -a- w4 with body true at w1 and w3.

    ``a`` is the first K agent and ``b`` the first L agent after it; every
    other agent is left as the identity, which makes its operators vanish.
    """
    if shape_of(v) != KL_SIMPLE:
        raise PreconditionViolated(f"{v} is not KL-simple")
    if not is_contingent(v.body):
        raise NonContingentBody(f"body {v.body} is a tautology or a contradiction")
    k_at = v.kinds.index("K")
    a = v.agents[k_at]
    b = v.agents[v.kinds.index("L", k_at)]
    yes = find_assignment(v.body)
    no = find_assignment(Not(v.body))
    worlds = ["w1", "w2", "w3", "w4"]
    model = KripkeModel.build(
        worlds,
        {a: [["w1", "w2"], ["w3", "w4"]], b: [["w2", "w3"]]},
        _valuation(atoms(v.body), {"w1": yes, "w2": no, "w3": yes, "w4": no}),
    )
    return _checked(PointedModel(model, "w1"), v.formula)


def l_chain(agents: Sequence[str], body: Formula) -> Formula:
    out = body
    for a in reversed(agents):
        out = Poss(a, out)
    return out


def build_conj_chain_countermodel(alpha: Formula, lseq: Sequence[str], beta: Formula) -> PointedModel:
    """Path w1 -l1- w2 ... -ln- w(n+1) refuting ``alpha & L_l1 ... L_ln beta``.

    w1 satisfies alpha but not beta, the far end satisfies beta (and not
    alpha when possible), and every world in between falsifies alpha, so
    the announcement strands w1.
    """
    lseq = [str(a) for a in lseq]
    if not lseq or len(set(lseq)) != len(lseq):
        raise PreconditionViolated("agent sequence must be non-empty and pairwise distinct")
    if not is_contingent(alpha):
        raise NonContingentBody(f"alpha {alpha} is not contingent")
    if prop_entails(alpha, beta):
        raise PreconditionViolated(f"alpha {alpha} entails beta {beta}")
    if not prop_sat(beta):
        raise PreconditionViolated(f"beta {beta} is unsatisfiable")
    if len(lseq) == 1 and prop_entails(beta, alpha):
        raise PreconditionViolated(f"beta {beta} entails alpha {alpha} with a single L")
    names = atoms(alpha) | atoms(beta)
    n = len(lseq)
    worlds = [f"w{i + 1}" for i in range(n + 1)]
    first = find_assignment(And(alpha, Not(beta)), names)
    last = find_assignment(And(beta, Not(alpha)), names) or find_assignment(beta, names)
    middle = find_assignment(Not(alpha), names)
    asg = {w: middle for w in worlds[1:-1]}
    asg[worlds[0]] = first
    asg[worlds[-1]] = last
    parts: Dict[str, list] = {}
    for i, agent in enumerate(lseq):
        parts[agent] = [[worlds[i], worlds[i + 1]]]
    model = KripkeModel.build(worlds, parts, _valuation(names, asg))
    return _checked(PointedModel(model, "w1"), And(alpha, l_chain(lseq, beta)))


def build_glued_countermodel(left: SingleTermView, right: SingleTermView) -> PointedModel:
    """Two KL-simple counter-models sharing their point.

    Needs disjoint agents and disjoint propositions: each side's worlds carry
    a satisfying assignment for the other side's body, so the other conjunct
    collapses to its body there.
    """
    if set(left.agents) & set(right.agents):
        raise PreconditionViolated("terms share agents")
    if atoms(left.body) & atoms(right.body):
        raise PreconditionViolated("terms share propositions")
    lm = build_klsimple_countermodel(left).model
    rm = build_klsimple_countermodel(right).model
    ren = {w: w.replace("w", "u") for w in rm.worlds if w != "w1"}
    worlds = list(lm.worlds) + [ren[w] for w in rm.worlds if w != "w1"]
    parts = {a: [list(b) for b in bl] for a, bl in lm.partitions.items()}
    for a, bl in rm.partitions.items():
        parts[a] = [[ren.get(w, w) for w in b] for b in bl]
    left_yes = find_assignment(left.body)
    right_yes = find_assignment(right.body)
    asg = {}
    for w in lm.worlds:
        asg[w] = {p: w in lm.true_at(p) for p in atoms(left.body)} | right_yes
    for w in rm.worlds:
        if w != "w1":
            asg[ren[w]] = {p: w in rm.true_at(p) for p in atoms(right.body)} | left_yes
    names = atoms(left.body) | atoms(right.body)
    model = KripkeModel.build(worlds, parts, _valuation(names, asg))
    return _checked(PointedModel(model, "w1"), And(left.formula, right.formula))


def build_padded_countermodel(unsuccessful: SingleTermView, other: Formula) -> PointedModel:
    """KL-simple counter-model with ``other``'s body made true everywhere.

    ``other`` is a single term (or propositional) over propositions disjoint
    from the unsuccessful term, so it holds at every world and the
    conjunction behaves like the unsuccessful term alone.
    """
    from pal.formula import as_single_term, is_propositional

    body = other if is_propositional(other) else as_single_term(other).body
    if atoms(body) & atoms(unsuccessful.body):
        raise PreconditionViolated("terms share propositions")
    yes = find_assignment(body)
    if yes is None:
        raise PreconditionViolated(f"{body} is unsatisfiable")
    base = build_klsimple_countermodel(unsuccessful).model
    val = {p: list(base.true_at(p)) for p in atoms(unsuccessful.body)}
    for p in atoms(body):
        val[p] = list(base.worlds) if yes[p] else []
    model = KripkeModel.build(base.worlds, {a: [list(b) for b in bl] for a, bl in base.partitions.items()}, val)
    return _checked(PointedModel(model, "w1"), And(other, unsuccessful.formula))


def build_figure3_model() -> KripkeModel:
    """Six-world model drawn for K_1 K_2 L_1 p, with p at w1 and w4."""
    return KripkeModel.build(
        ["w1", "w2", "w3", "w4", "w5", "w6"],
        {
            "1": [["w1", "w2"], ["w3", "w4", "w5"], ["w6"]],
            "2": [["w2", "w3"], ["w5", "w6"], ["w1"], ["w4"]],
        },
        {"p": ["w1", "w4"]},
    )
