"""Syntactic success classification with rule provenance.

``classify`` maps a formula to Successful / Unsuccessful / Unknown.  Every
definite verdict names the rule that fired; every Unsuccessful verdict
carries a witness recipe that rebuilds a refuting pointed model on demand.

Two rule sets exist.  ``PAPER`` applies each published rule as stated.
``VALIDATED`` drops the applications the bounded oracle refutes; those are
reported as Unknown with the reason attached.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

from pal.formula import (
    And,
    Formula,
    SingleTermView,
    UnsupportedNegation,
    as_single_term,
    atoms,
    conjoin,
    has_announcement,
    has_common,
    in_universal_fragment,
    is_propositional,
    prop_entails,
    prop_equiv,
    prop_sat,
    prop_taut,
    shape_of,
    to_nnf,
)
from pal.kripke import PointedModel


class RuleSet(str, enum.Enum):
    PAPER = "paper"
    VALIDATED = "validated"


class Status(str, enum.Enum):
    SUCCESSFUL = "Successful"
    UNSUCCESSFUL = "Unsuccessful"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Rule:
    id: str
    citation: str
    disputed: bool = False


def _rules(*rows):
    return {r[0]: Rule(*r) for r in rows}


RULES = _rules(
    ("UniversalFragment", "built from literals, and, or, K: preserved under submodels, hence successful"),
    ("TautBody", "single term over a tautology is valid, hence successful"),
    ("ContraBody", "single term over a contradiction is unsatisfiable, hence successful"),
    ("KSimple", "K-simple single terms are successful"),
    ("LSimple", "L-simple single terms are successful"),
    ("LKSimple", "L operators followed by K operators, agents distinct: successful"),
    ("KLSimple", "an L inside the scope of a K, agents distinct: unsuccessful"),
    ("KCompound", "K-only single terms with repeated agents are successful"),
    ("LCompound", "L-only single terms with repeated agents are successful"),
    ("KiLjKi", "K_i L_j K_i a is successful"),
    ("KiKjLi", "K_i K_j L_i a is unsuccessful", True),
    ("LiKjKkLi", "L_i K_j K_k L_i a is successful"),
    ("ConjCase1", "a & b, a & K..b and K..a & K..b are successful"),
    ("ConjCase2", "a & L..b (two or more L) is successful iff a entails b"),
    ("ConjCase3", "a & L..K..b (two or more L) is unsuccessful"),
    ("ConjCase4", "K..a & L..b (two or more L) is successful iff a entails b"),
    ("ConjCase5", "K..a & L..K..b, L..a & L..b, L..a & L..K..b, L..K..a & L..K..b are unsuccessful"),
    ("FootnoteA", "a & L_i K..b is successful iff b entails a"),
    ("FootnoteB", "L_i a & L_j b is successful iff a and b are equivalent"),
    ("FootnoteC", "a & L_i b is successful iff a entails b or b entails a"),
    ("ConjUnsuccPair", "conjunction of two unsuccessful simple single terms is unsuccessful"),
    ("ConjSuccUnsucc", "conjunction of a successful and an unsuccessful formula is unsuccessful"),
)


# -- witness recipes ----------------------------------------------------------


@dataclass(frozen=True)
class WitnessRecipe:
    """A deferred counter-model construction: builder name plus arguments."""

    builder: str
    args: Tuple = ()

    def build(self) -> PointedModel:
        from pal import oracle

        if self.builder == "bounded-search":
            return _search_witness(*self.args)
        return getattr(oracle, self.builder)(*self.args)

    def describe(self) -> str:
        return f"{self.builder}({', '.join(str(a) for a in self.args)})"


def _search_witness(f: Formula, max_worlds: int = 4, chain_worlds: int = 8) -> PointedModel:
    from pal.formula import agents
    from pal.oracle import SearchBounds, find_success_counterexample

    ags = tuple(sorted(agents(f)))
    for bounds in (SearchBounds(max_worlds, ags), SearchBounds(chain_worlds, ags, "chain")):
        report = find_success_counterexample(f, bounds)
        if report.found:
            return report.witness
    raise LookupError(f"no counter-model for {f} within the recipe's search bounds")


# -- verdicts -----------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    status: Status
    rule: Optional[Rule] = None
    witness_recipe: Optional[WitnessRecipe] = None
    reason: str = ""

    @property
    def disputed(self) -> bool:
        return self.rule is not None and self.rule.disputed

    def to_dict(self, materialize: bool = False) -> dict:
        d = {
            "status": self.status.value,
            "rule_id": self.rule.id if self.rule else None,
            "citation": self.rule.citation if self.rule else None,
            "disputed": self.disputed,
            "reason": self.reason or None,
        }
        if self.witness_recipe is not None:
            d["witness_recipe"] = self.witness_recipe.describe()
            if materialize:
                d["witness"] = self.witness_recipe.build().to_dict()
        return d


def successful(rule_id: str, reason: str = "") -> Verdict:
    return Verdict(Status.SUCCESSFUL, RULES[rule_id], reason=reason)


def unsuccessful(rule_id: str, recipe: Optional[WitnessRecipe], reason: str = "") -> Verdict:
    return Verdict(Status.UNSUCCESSFUL, RULES[rule_id], recipe, reason)


def unknown(reason: str) -> Verdict:
    return Verdict(Status.UNKNOWN, reason=reason)


def disputed(v: Verdict, reason: str) -> Verdict:
    """Mark one application of a rule as refuted by the oracle."""
    return replace(v, rule=replace(v.rule, disputed=True), reason=reason)


def _apply_mode(v: Verdict, rs: RuleSet) -> Verdict:
    if RuleSet(rs) is RuleSet.VALIDATED and v.disputed:
        why = v.reason or "rule is contradicted by the semantic oracle"
        return unknown(f"rule {v.rule.id} disputed: {why}")
    return v


# -- single terms -------------------------------------------------------------

_SHAPE_RULES = {
    "PureK": "KSimple",
    "PureL": "LSimple",
    "LKSimple": "LKSimple",
    "KCompound": "KCompound",
    "LCompound": "LCompound",
}


def classify_single_term(v: SingleTermView, rs: RuleSet = RuleSet.VALIDATED) -> Verdict:
    return _apply_mode(_single_term(v), rs)


def _single_term(v: SingleTermView) -> Verdict:
    if prop_taut(v.body):
        return successful("TautBody")
    if not prop_sat(v.body):
        return successful("ContraBody")
    shape = shape_of(v)
    if shape.kind in _SHAPE_RULES:
        return successful(_SHAPE_RULES[shape.kind])
    if shape.kind == "KLSimple":
        return unsuccessful("KLSimple", WitnessRecipe("build_klsimple_countermodel", (v,)))
    if shape.tag in ("KiLjKi", "LiKjKkLi"):
        return successful(shape.tag)
    if shape.tag == "KiKjLi":
        return unsuccessful(
            "KiKjLi",
            None,
            "K_i is constant on i-blocks, so the announcement removes whole i-blocks "
            "and every surviving L_i witness survives with them",
        )
    reduced = v.collapse()
    if reduced != v:
        inner = _single_term(reduced)
        if inner.status is not Status.UNKNOWN:
            note = f"equivalent in S5 to {reduced} (adjacent same-agent operators merged)"
            return replace(inner, reason="; ".join(x for x in (note, inner.reason) if x))
    return unknown("compound single term outside the characterised patterns")


# -- conjunctions -------------------------------------------------------------

_SUCC_ORDER = {"prop": 0, "K": 1, "L": 2, "LK": 3}


@dataclass(frozen=True)
class _Term:
    kind: str  # prop | K | L | LK | KL
    body: Formula
    view: Optional[SingleTermView] = None

    @property
    def formula(self) -> Formula:
        return self.body if self.view is None else self.view.formula

    @property
    def agents(self) -> frozenset:
        return frozenset(self.view.agents) if self.view else frozenset()

    @property
    def l_len(self) -> int:
        return self.view.kinds.count("L") if self.view else 0


_KIND_OF_SHAPE = {"PureK": "K", "PureL": "L", "LKSimple": "LK", "KLSimple": "KL"}


def _term_of(v: SingleTermView):
    v = v.collapse()
    if not v.ops:
        return _Term("prop", v.body)
    kind = _KIND_OF_SHAPE.get(shape_of(v).kind)
    if kind is None:
        return None
    return _Term(kind, v.body, v)


def classify_conjunction(terms: Sequence[SingleTermView], rs: RuleSet = RuleSet.VALIDATED) -> Verdict:
    """Classify the conjunction of single terms (empty prefix = propositional)."""
    return _apply_mode(_conjunction(list(terms)), rs)


def _conjunction(views) -> Verdict:
    terms = []
    for v in views:
        if prop_taut(v.body):
            continue
        if not prop_sat(v.body):
            return successful("ContraBody", f"conjunct {v} is unsatisfiable")
        t = _term_of(v)
        if t is None:
            return unknown(f"conjunct {v} is a compound single term")
        terms.append(t)
    props = [t.body for t in terms if t.kind == "prop"]
    modal = [t for t in terms if t.kind != "prop"]
    if props:
        alpha = conjoin(props)
        if prop_taut(alpha):
            props = []
        elif not prop_sat(alpha):
            return successful("ContraBody", "propositional conjuncts are jointly unsatisfiable")
        else:
            modal.insert(0, _Term("prop", alpha))
    terms = modal
    if not terms:
        return successful("TautBody", "every conjunct is valid")
    if len(terms) == 1:
        t = terms[0]
        if t.view is None:
            return successful("UniversalFragment")
        return _single_term(t.view)
    if len(terms) > 2:
        return _many(terms)
    return _pair(*terms)


def _many(terms) -> Verdict:
    if all(t.kind == "KL" for t in terms):
        seen = set()
        for t in terms:
            if seen & t.agents:
                return unknown("guard failed: unsuccessful conjuncts share agents")
            seen |= t.agents
        f = conjoin([t.formula for t in terms])
        return unsuccessful("ConjUnsuccPair", WitnessRecipe("bounded-search", (f,)))
    return unknown("more than two conjuncts and no rule applies at every step")


def _pair_rules(a: _Term, b: _Term) -> Verdict:
    conj = And(a.formula, b.formula)
    search = WitnessRecipe("bounded-search", (conj,))
    if a.kind == "KL" and b.kind == "KL":
        if a.agents & b.agents:
            return unknown("guard failed: unsuccessful conjuncts share agents")
        if atoms(a.body) & atoms(b.body):
            return unsuccessful("ConjUnsuccPair", search)
        return unsuccessful("ConjUnsuccPair", WitnessRecipe("build_glued_countermodel", (a.view, b.view)))
    if "KL" in (a.kind, b.kind):
        bad, good = (a, b) if a.kind == "KL" else (b, a)
        if atoms(bad.body) & atoms(good.body):
            return unknown("guard failed: conjuncts share propositions")
        return unsuccessful("ConjSuccUnsucc", WitnessRecipe("build_padded_countermodel", (bad.view, good.formula)))

    a, b = sorted((a, b), key=lambda t: _SUCC_ORDER[t.kind])
    pair = (a.kind, b.kind)
    alpha, beta = a.body, b.body
    if pair in (("prop", "prop"), ("prop", "K"), ("K", "K")):
        return successful("ConjCase1")
    if pair == ("prop", "L"):
        lseq = b.view.agents
        if b.l_len >= 2:
            if prop_entails(alpha, beta):
                return successful("ConjCase2")
            return unsuccessful("ConjCase2", WitnessRecipe("build_conj_chain_countermodel", (alpha, lseq, beta)))
        if prop_entails(alpha, beta) or prop_entails(beta, alpha):
            return successful("FootnoteC")
        return unsuccessful("FootnoteC", WitnessRecipe("build_conj_chain_countermodel", (alpha, lseq, beta)))
    if pair == ("prop", "LK"):
        rule = "ConjCase3" if b.l_len >= 2 else "FootnoteA"
        if rule == "FootnoteA" and prop_entails(beta, alpha):
            return successful("FootnoteA")
        v = unsuccessful(rule, search)
        if prop_entails(alpha, beta):
            return disputed(v, "alpha entails beta: no counter-model within the oracle bounds")
        return v
    if pair == ("K", "L"):
        if b.l_len >= 2:
            if prop_entails(alpha, beta):
                return successful("ConjCase4")
            return unsuccessful("ConjCase4", search)
        return unknown("single L operator against a K chain: no rule given")
    if pair == ("L", "L") and a.l_len == 1 and b.l_len == 1:
        if a.agents == b.agents:
            return unknown("guard failed: both single L operators use the same agent")
        if prop_equiv(alpha, beta):
            return successful("FootnoteB")
        return unsuccessful("FootnoteB", search)
    if pair in (("K", "LK"), ("L", "L"), ("L", "LK"), ("LK", "LK")):
        l_lens = [t.l_len for t in (a, b) if t.kind != "K"]
        if min(l_lens) < 2:
            return unknown("single L operator in a case-5 pattern: no rule given")
        v = unsuccessful("ConjCase5", search)
        why = _case5_dispute(a, b)
        return disputed(v, why) if why else v
    raise AssertionError(pair)


def _ops(t: _Term):
    return t.view.ops if t.view is not None else ()


def term_entails(x: _Term, y: _Term) -> bool:
    """Sufficient syntactic test for ``x |= y`` between successful terms.

    ``y``'s prefix must arise from ``x``'s by inserting L operators
    (``f -> L_i f``) and deleting K operators (``K_i f -> f``); the bodies
    must entail propositionally.  Both steps are monotone in context.
    """
    xs, ys = _ops(x), _ops(y)
    m, n = len(xs), len(ys)
    reach = [[False] * (n + 1) for _ in range(m + 1)]
    reach[m][n] = True
    for i in range(m, -1, -1):
        for j in range(n, -1, -1):
            if i == m and j == n:
                continue
            ok = False
            if i < m and j < n and xs[i] == ys[j]:
                ok = reach[i + 1][j + 1]
            if not ok and i < m and xs[i][0] == "K":
                ok = reach[i + 1][j]
            if not ok and j < n and ys[j][0] == "L":
                ok = reach[i][j + 1]
            reach[i][j] = ok
    return reach[0][0] and prop_entails(x.body, y.body)


def _pair(a: _Term, b: _Term) -> Verdict:
    v = _pair_rules(a, b)
    if v.status is Status.UNSUCCESSFUL and not v.disputed and "KL" not in (a.kind, b.kind):
        if term_entails(a, b) or term_entails(b, a):
            return disputed(v, "one conjunct entails the other, so the conjunction is a single successful term")
    return v


def _case5_dispute(a: _Term, b: _Term) -> str:
    """Sub-patterns of case 5 where the bounded oracle finds no counter-model.

    Apart from equal L bodies, each is a conjunction in which one conjunct
    entails the other, so it collapses to a single successful term.
    """
    alpha, beta = a.body, b.body
    comparable = prop_entails(alpha, beta) or prop_entails(beta, alpha)
    pair = (a.kind, b.kind)
    if pair == ("K", "LK") and prop_entails(alpha, beta):
        return "alpha entails beta: no counter-model within the oracle bounds"
    if pair == ("L", "L"):
        if prop_equiv(alpha, beta):
            return "equivalent bodies: no counter-model within the oracle bounds"
        if a.view.ops == b.view.ops and comparable:
            return "one conjunct entails the other: collapses to one L-simple term"
    if pair == ("L", "LK"):
        l_prefix = tuple(op for op in b.view.ops if op[0] == "L")
        if a.view.ops == l_prefix and prop_entails(beta, alpha):
            return "the LK conjunct entails the L conjunct: collapses to one LK-simple term"
    if pair == ("LK", "LK") and a.view.ops == b.view.ops and comparable:
        return "one conjunct entails the other: collapses to one LK-simple term"
    return ""


# -- dispatcher -----------------------------------------------------------------


def conjuncts(f: Formula):
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


def classify(f: Formula, rs: RuleSet = RuleSet.VALIDATED) -> Verdict:
    """Classify any formula; falls back to Unknown outside the covered fragments."""
    if in_universal_fragment(f):
        return successful("UniversalFragment")
    if has_common(f):
        return unknown("common knowledge is evaluated but never classified")
    if has_announcement(f):
        return unknown("announcement outside the universal-fragment pattern")
    try:
        g = to_nnf(f)
    except UnsupportedNegation as exc:
        return unknown(str(exc))
    if in_universal_fragment(g):
        return successful("UniversalFragment", "after negation normal form")
    v = as_single_term(g)
    if v is not None:
        return classify_single_term(v, rs)
    views = []
    for c in conjuncts(g):
        if is_propositional(c):
            views.append(SingleTermView((), c))
            continue
        cv = as_single_term(c)
        if cv is None:
            return unknown(f"conjunct {c} is not a single term")
        views.append(cv)
    if len(views) < 2:
        return unknown("not a single term or a conjunction of single terms")
    return classify_conjunction(views, rs)
