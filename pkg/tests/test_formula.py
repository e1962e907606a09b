import random

import pytest
from hypothesis import given, settings

from conftest import formulas, models
from pal.formula import (
    KL_SIMPLE,
    LK_SIMPLE,
    L_COMPOUND,
    PURE_K,
    PURE_L,
    K_COMPOUND,
    And,
    Atom,
    Know,
    Not,
    Or,
    Poss,
    Shape,
    TooManyAtoms,
    UnsupportedNegation,
    as_single_term,
    conjoin,
    in_supermodel_fragment,
    in_universal_fragment,
    is_nnf,
    prop_entails,
    prop_equiv,
    prop_taut,
    shape_of,
    to_nnf,
)
from pal.generate import random_formula, single_terms
from pal.kripke import truth_set
from pal.oracle import enumerate_models
from pal.parser import parse

p, q = Atom("p"), Atom("q")


def view(text):
    return as_single_term(to_nnf(parse(text)))


class TestNNF:
    def test_modal_dual(self):
        assert to_nnf(Not(Know("a", p))) == Poss("a", Not(p))

    def test_de_morgan(self):
        assert to_nnf(Not(And(p, q))) == Or(Not(p), Not(q))

    def test_double_dual(self):
        assert to_nnf(Not(Poss("1", Not(p)))) == Know("1", p)

    @pytest.mark.parametrize("text", ["~C p", "~[p] q", "K_a ~C p", "~(p & [q] r)"])
    def test_rejects_negated_common_and_announcement(self, text):
        with pytest.raises(UnsupportedNegation):
            to_nnf(parse(text))

    @given(formulas(common=False, announce=False))
    def test_idempotent(self, f):
        g = to_nnf(f)
        assert is_nnf(g)
        assert to_nnf(g) == g

    def test_soundness_on_random_triples(self):
        rng = random.Random(20261016)
        pool = {n: list(enumerate_models(n, ["a", "b"], ["p", "q"])) for n in (1, 2, 3)}
        for _ in range(1000):
            f = random_formula(rng, 4)
            m = rng.choice(pool[rng.choice((1, 2, 3))])
            w = rng.choice(m.worlds)
            assert (w in truth_set(m, to_nnf(f))) == (w in truth_set(m, f))


class TestSingleTerm:
    def test_prefix_and_body(self):
        v = view("K_1 L_2 p")
        assert v.ops == (("K", "1"), ("L", "2"))
        assert v.body == p

    def test_conjunction_is_not_a_single_term(self):
        assert as_single_term(parse("p & q")) is None

    def test_body_may_be_any_propositional_formula(self):
        v = view("L_1 (p | ~q)")
        assert v.ops == (("L", "1"),)
        assert v.body == Or(p, Not(q))

    def test_modal_body_is_not_single_term(self):
        assert as_single_term(parse("K_1 (p & K_2 q)")) is None

    def test_round_trip_formula(self):
        f = parse("L_1 K_2 L_3 (p & q)")
        assert as_single_term(f).formula == f

    def test_collapse_merges_adjacent_same_agent(self):
        assert view("K_1 L_1 K_2 K_2 p").collapse() == view("L_1 K_2 p")


class TestShape:
    @pytest.mark.parametrize(
        "text, shape",
        [
            ("K_1 L_2 L_3 K_4 L_5 p", KL_SIMPLE),
            ("L_1 K_2 p", LK_SIMPLE),
            ("K_1 L_2 K_1 p", Shape("MixedCompound", "KiLjKi")),
            ("K_1 K_2 L_1 p", Shape("MixedCompound", "KiKjLi")),
            ("L_1 K_2 K_3 L_1 p", Shape("MixedCompound", "LiKjKkLi")),
            ("L_2 L_1 K_a K_b L_1 p", Shape("MixedCompound", "other")),
            ("K_1 K_2 p", PURE_K),
            ("L_1 L_2 p", PURE_L),
            ("K_1 K_1 p", K_COMPOUND),
            ("L_1 L_2 L_1 p", L_COMPOUND),
            ("L_1 L_2 K_3 L_4 p", KL_SIMPLE),
        ],
    )
    def test_examples(self, text, shape):
        assert shape_of(view(text)) == shape

    def test_total_and_partitioned(self):
        simple = {"PureK", "PureL", "LKSimple", "KLSimple"}
        for v in single_terms(4, ["1", "2", "3"], p):
            s = shape_of(v)
            assert s == shape_of(v)
            assert (s.kind in simple) == v.is_simple()


class TestPropositional:
    def test_entails(self):
        assert prop_entails(And(p, q), p)
        assert not prop_entails(p, q)

    def test_taut(self):
        assert prop_taut(Or(p, Not(p)))
        assert not prop_taut(p)

    def test_equiv(self):
        assert prop_equiv(Not(And(p, q)), Or(Not(p), Not(q)))
        assert not prop_equiv(p, Or(p, q))

    def test_atom_cap(self):
        big = conjoin([Atom(f"x{i}") for i in range(21)])
        with pytest.raises(TooManyAtoms):
            prop_taut(big)
        assert not prop_taut(conjoin([Atom(f"x{i}") for i in range(20)]))


class TestFragments:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("K_1 (p & K_2 q)", True),
            ("~K_1 p", False),
            ("p | ~q", True),
            ("[~p] p", True),
            ("[~K_a p] K_a p", True),
            ("[p] p", False),
            ("L_a p", False),
            ("C p", False),
        ],
    )
    def test_universal(self, text, expected):
        assert in_universal_fragment(parse(text)) is expected

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("L_a (p | q)", True),
            ("K_a p", False),
            ("~[p] ~q", True),
            ("~[L_a p] ~(q & ~r)", True),
            ("~(p & q)", False),
            ("[p] q", False),
        ],
    )
    def test_supermodel(self, text, expected):
        assert in_supermodel_fragment(parse(text)) is expected


@settings(max_examples=200, deadline=None)
@given(formulas(announce=False, common=False, max_leaves=8, agents=("a", "b"), props=("p", "q")), models())
def test_poss_is_dual_of_know(f, m):
    for a in ("a", "b"):
        assert truth_set(m, Poss(a, f)) == truth_set(m, Not(Know(a, Not(f))))
