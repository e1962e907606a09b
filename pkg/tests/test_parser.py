import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import formulas
from pal.formula import BOTTOM, TOP, And, Announce, Atom, Common, Know, Not, Or, Poss, iff, implies
from pal.parser import SourceError, parse, render

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize(
    "text, tree",
    [
        ("p & ~K_b p", And(p, Not(Know("b", p)))),
        ("K_1 L_2 p", Know("1", Poss("2", p))),
        ("[p] q", Announce(p, q)),
        ("!p", Not(p)),
        ("C K_a p", Common(Know("a", p))),
        ("true | false", Or(TOP, BOTTOM)),
        ("p & q | r", Or(And(p, q), r)),
        ("p | q & r", Or(p, And(q, r))),
        ("p -> q -> r", implies(p, implies(q, r))),
        ("p <-> q <-> r", iff(iff(p, q), r)),
        ("p | q -> r", implies(Or(p, q), r)),
        ("~K_a(p)", Not(Know("a", p))),
        ("[p & q]~q", Announce(And(p, q), Not(q))),
        ("K_ab x1", Know("ab", Atom("x1"))),
    ],
)
def test_parse(text, tree):
    assert parse(text) == tree


def test_whitespace_insensitive():
    assert parse("  K_a   (p&q)\n") == parse("K_a (p & q)")


@pytest.mark.parametrize(
    "tree, text",
    [
        (Know("a", p), "K_a p"),
        (And(p, Or(q, r)), "p & (q | r)"),
        (Not(p), "~p"),
        (And(And(p, q), r), "p & q & r"),
        (And(p, And(q, r)), "p & (q & r)"),
        (Not(And(p, q)), "~(p & q)"),
        (Announce(Or(p, q), Know("1", p)), "[p | q] K_1 p"),
        (Know("1", Poss("2", p)), "K_1 L_2 p"),
    ],
)
def test_render(tree, text):
    assert render(tree) == text


@pytest.mark.parametrize(
    "text, position",
    [("p &&", 3), ("p &", 3), ("(p", 2), ("K p", 0), ("P", 0), ("[p q", 3), ("p q", 2), ("", 0), ("true_", None)],
)
def test_errors(text, position):
    if position is None:
        parse(text)  # plain atom
        return
    with pytest.raises(SourceError) as exc:
        parse(text)
    assert exc.value.position == position
    assert 0 <= exc.value.position <= len(text)


@settings(max_examples=500, deadline=None)
@given(formulas())
def test_round_trip(f):
    assert parse(render(f)) == f


@settings(max_examples=500, deadline=None)
@given(st.binary(max_size=40))
def test_arbitrary_bytes_never_crash(data):
    try:
        parse(data)
    except SourceError as exc:
        assert 0 <= exc.position <= len(data)


@settings(max_examples=500, deadline=None)
@given(st.text(alphabet="pqKL_12ab~!&|()[]-<> Ctruefals", max_size=30))
def test_arbitrary_text_never_crash(text):
    try:
        f = parse(text)
    except SourceError as exc:
        assert 0 <= exc.position <= len(text)
    else:
        assert parse(render(f)) == f
