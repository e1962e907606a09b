"""PAL formula syntax trees and structural analyses.

Formulas are immutable, hashable dataclasses.  Agents and propositions are
plain strings so that numeric (``K_1``) and named (``K_a``) agents coexist.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

MAX_TRUTH_TABLE_ATOMS = 20


class FormulaError(ValueError):
    pass


class UnsupportedNegation(FormulaError):
    """Raised when a negation sits over a common-knowledge or announcement node."""


class TooManyAtoms(FormulaError):
    pass


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        from pal.parser import render

        return render(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "TOP"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "BOTTOM"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True)
class Poss(Formula):
    """Epistemic possibility, the dual of :class:`Know`."""

    agent: str
    sub: Formula


@dataclass(frozen=True)
class Common(Formula):
    sub: Formula


@dataclass(frozen=True)
class Announce(Formula):
    """``[announcement] sub``: ``sub`` holds after a truthful announcement."""

    announcement: Formula
    sub: Formula


MODAL = (Know, Poss)


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def conjoin(parts: Sequence[Formula]) -> Formula:
    """Left-nested conjunction; ``TOP`` for an empty sequence."""
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, (Not, Know, Poss, Common)):
        return (f.sub,)
    if isinstance(f, (And, Or)):
        return (f.left, f.right)
    if isinstance(f, Announce):
        return (f.announcement, f.sub)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))


def atoms(f: Formula) -> frozenset:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def agents(f: Formula) -> frozenset:
    return frozenset(g.agent for g in subformulas(f) if isinstance(g, MODAL))


def modal_depth(f: Formula) -> int:
    if isinstance(f, MODAL) or isinstance(f, Common):
        return 1 + modal_depth(f.sub)
    return max((modal_depth(c) for c in children(f)), default=0)


def is_propositional(f: Formula) -> bool:
    return all(isinstance(g, (Atom, Top, Bottom, Not, And, Or)) for g in subformulas(f))


def has_announcement(f: Formula) -> bool:
    return any(isinstance(g, Announce) for g in subformulas(f))


def has_common(f: Formula) -> bool:
    return any(isinstance(g, Common) for g in subformulas(f))


# -- negation normal form ---------------------------------------------------


def to_nnf(f: Formula) -> Formula:
    """Push negations down to atoms using De Morgan and the K/L duality.

    Raises :class:`UnsupportedNegation` for a negated ``C`` or announcement.
    """
    if isinstance(f, Not):
        return _negate(f.sub)
    if isinstance(f, And):
        return And(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, Or):
        return Or(to_nnf(f.left), to_nnf(f.right))
    if isinstance(f, Know):
        return Know(f.agent, to_nnf(f.sub))
    if isinstance(f, Poss):
        return Poss(f.agent, to_nnf(f.sub))
    if isinstance(f, Common):
        return Common(to_nnf(f.sub))
    if isinstance(f, Announce):
        return Announce(to_nnf(f.announcement), to_nnf(f.sub))
    return f


def _negate(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return Not(f)
    if isinstance(f, Top):
        return BOTTOM
    if isinstance(f, Bottom):
        return TOP
    if isinstance(f, Not):
        return to_nnf(f.sub)
    if isinstance(f, And):
        return Or(_negate(f.left), _negate(f.right))
    if isinstance(f, Or):
        return And(_negate(f.left), _negate(f.right))
    if isinstance(f, Know):
        return Poss(f.agent, _negate(f.sub))
    if isinstance(f, Poss):
        return Know(f.agent, _negate(f.sub))
    raise UnsupportedNegation(f"no negation normal form for the negation of {f}")


def is_nnf(f: Formula) -> bool:
    return all(not isinstance(g, Not) or isinstance(g.sub, Atom) for g in subformulas(f))


# -- single terms -----------------------------------------------------------


@dataclass(frozen=True)
class SingleTermView:
    """A modality prefix ``E_1 ... E_n`` over a propositional body.

    ``ops`` holds ``(kind, agent)`` pairs outermost first, kind being
    ``"K"`` or ``"L"``.
    """

    ops: Tuple[Tuple[str, str], ...]
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple((k, str(a)) for k, a in self.ops))
        for kind, _ in self.ops:
            if kind not in ("K", "L"):
                raise FormulaError(f"modality must be K or L, got {kind!r}")
        if not is_propositional(self.body):
            raise FormulaError("single-term body must be propositional")

    @property
    def formula(self) -> Formula:
        out = self.body
        for kind, agent in reversed(self.ops):
            out = Know(agent, out) if kind == "K" else Poss(agent, out)
        return out

    @property
    def agents(self) -> Tuple[str, ...]:
        return tuple(a for _, a in self.ops)

    @property
    def kinds(self) -> str:
        return "".join(k for k, _ in self.ops)

    def is_simple(self) -> bool:
        return len(set(self.agents)) == len(self.ops)

    def collapse(self) -> "SingleTermView":
        """Merge adjacent operators of one agent; in S5 the inner one wins."""
        ops = []
        for op in self.ops:
            if ops and ops[-1][1] == op[1]:
                ops[-1] = op
            else:
                ops.append(op)
        return SingleTermView(tuple(ops), self.body)

    def __str__(self):
        return str(self.formula)


def as_single_term(f: Formula) -> Optional[SingleTermView]:
    """Split ``f`` into a K/L prefix and a propositional body.

    Returns ``None`` unless ``f`` starts with at least one modality and
    the chain bottoms out in a propositional formula.
    """
    ops = []
    g = f
    while isinstance(g, MODAL):
        ops.append(("K" if isinstance(g, Know) else "L", g.agent))
        g = g.sub
    if not ops or not is_propositional(g):
        return None
    return SingleTermView(tuple(ops), g)


@dataclass(frozen=True)
class Shape:
    kind: str
    tag: Optional[str] = None

    def __str__(self):
        return f"{self.kind}({self.tag})" if self.tag else self.kind


PURE_K = Shape("PureK")
PURE_L = Shape("PureL")
LK_SIMPLE = Shape("LKSimple")
KL_SIMPLE = Shape("KLSimple")
K_COMPOUND = Shape("KCompound")
L_COMPOUND = Shape("LCompound")


def shape_of(v: SingleTermView) -> Shape:
    kinds = v.kinds
    if v.is_simple():
        if "L" not in kinds:
            return PURE_K
        if "K" not in kinds:
            return PURE_L
        if "L" in kinds[kinds.index("K"):]:
            return KL_SIMPLE
        return LK_SIMPLE
    if "L" not in kinds:
        return K_COMPOUND
    if "K" not in kinds:
        return L_COMPOUND
    return Shape("MixedCompound", _compound_tag(v))


def _compound_tag(v: SingleTermView) -> str:
    kinds, ag = v.kinds, v.agents
    if kinds == "KLK" and ag[0] == ag[2] != ag[1]:
        return "KiLjKi"
    if kinds == "KKL" and ag[0] == ag[2] != ag[1]:
        return "KiKjLi"
    if kinds == "LKKL" and ag[0] == ag[3] and len({ag[0], ag[1], ag[2]}) == 3:
        return "LiKjKkLi"
    return "other"


# -- propositional reasoning ------------------------------------------------


def prop_value(f: Formula, assignment) -> bool:
    """Evaluate a propositional formula; ``assignment`` maps atom -> bool."""
    if isinstance(f, Atom):
        return bool(assignment.get(f.name, False))
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not prop_value(f.sub, assignment)
    if isinstance(f, And):
        return prop_value(f.left, assignment) and prop_value(f.right, assignment)
    if isinstance(f, Or):
        return prop_value(f.left, assignment) or prop_value(f.right, assignment)
    raise FormulaError(f"not propositional: {f}")


def assignments(names) -> Iterator[dict]:
    names = sorted(names)
    if len(names) > MAX_TRUTH_TABLE_ATOMS:
        raise TooManyAtoms(f"{len(names)} atoms exceed the truth-table cap of {MAX_TRUTH_TABLE_ATOMS}")
    for bits in itertools.product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))


def _check_prop(*fs: Formula):
    for f in fs:
        if not is_propositional(f):
            raise FormulaError(f"not propositional: {f}")


def find_assignment(f: Formula, names=()) -> Optional[dict]:
    """First satisfying assignment (in truth-table order) over atoms(f) | names."""
    _check_prop(f)
    for a in assignments(atoms(f) | set(names)):
        if prop_value(f, a):
            return a
    return None


def prop_taut(a: Formula) -> bool:
    _check_prop(a)
    return all(prop_value(a, s) for s in assignments(atoms(a)))


def prop_sat(a: Formula) -> bool:
    return find_assignment(a) is not None


def prop_entails(a: Formula, b: Formula) -> bool:
    _check_prop(a, b)
    return all(prop_value(b, s) for s in assignments(atoms(a) | atoms(b)) if prop_value(a, s))


def prop_equiv(a: Formula, b: Formula) -> bool:
    _check_prop(a, b)
    return all(prop_value(a, s) == prop_value(b, s) for s in assignments(atoms(a) | atoms(b)))


def is_contingent(a: Formula) -> bool:
    return prop_sat(a) and prop_sat(Not(a))


# -- fragments --------------------------------------------------------------


def in_universal_fragment(f: Formula) -> bool:
    """Literals, conjunction, disjunction, K, and ``[~g]g`` announcements.

    Negation is admitted over atoms only (and inside the announcement
    pattern, where the grammar itself places it).
    """
    if isinstance(f, (Atom, Top, Bottom)):
        return True
    if isinstance(f, Not):
        return isinstance(f.sub, (Atom, Top, Bottom))
    if isinstance(f, (And, Or)):
        return in_universal_fragment(f.left) and in_universal_fragment(f.right)
    if isinstance(f, Know):
        return in_universal_fragment(f.sub)
    if isinstance(f, Announce):
        a = f.announcement
        return isinstance(a, Not) and a.sub == f.sub and in_universal_fragment(f.sub)
    return False


def in_supermodel_fragment(f: Formula) -> bool:
    """p | ~p | f & g | f | g | L_a f | ~[f]~g."""
    if isinstance(f, (Atom, Top, Bottom)):
        return True
    if isinstance(f, Not):
        g = f.sub
        if isinstance(g, (Atom, Top, Bottom)):
            return True
        return (
            isinstance(g, Announce)
            and isinstance(g.sub, Not)
            and in_supermodel_fragment(g.announcement)
            and in_supermodel_fragment(g.sub.sub)
        )
    if isinstance(f, (And, Or)):
        return in_supermodel_fragment(f.left) and in_supermodel_fragment(f.right)
    if isinstance(f, Poss):
        return in_supermodel_fragment(f.sub)
    return False
