from importlib import resources

import pytest
from hypothesis import strategies as st

from pal.formula import BOTTOM, TOP, And, Announce, Atom, Common, Know, Not, Or, Poss
from pal.kripke import KripkeModel


def fixture_model(name):
    return KripkeModel.from_json(resources.files("pal").joinpath(f"data/{name}.json").read_text())


@pytest.fixture
def fig1():
    return fixture_model("figure1")


@pytest.fixture
def fig2():
    return fixture_model("figure2")


@pytest.fixture
def fig3():
    return fixture_model("figure3")


AGENTS = ("a", "b", "c")
PROPS = ("p", "q", "r")


def formulas(max_leaves=12, agents=AGENTS, props=PROPS, announce=True, common=True):
    leaves = st.one_of(st.sampled_from(props).map(Atom), st.just(TOP), st.just(BOTTOM))

    def extend(children):
        options = [
            children.map(Not),
            st.tuples(children, children).map(lambda t: And(*t)),
            st.tuples(children, children).map(lambda t: Or(*t)),
            st.tuples(st.sampled_from(agents), children).map(lambda t: Know(*t)),
            st.tuples(st.sampled_from(agents), children).map(lambda t: Poss(*t)),
        ]
        if common:
            options.append(children.map(Common))
        if announce:
            options.append(st.tuples(children, children).map(lambda t: Announce(*t)))
        return st.one_of(*options)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def models(draw, max_worlds=4, agents=("a", "b"), props=("p", "q")):
    n = draw(st.integers(1, max_worlds))
    worlds = [f"w{i + 1}" for i in range(n)]
    parts = {}
    for a in agents:
        labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
        blocks = {}
        for w, lab in zip(worlds, labels):
            blocks.setdefault(lab, []).append(w)
        parts[a] = list(blocks.values())
    val = {p: [w for w in worlds if draw(st.booleans())] for p in props}
    return KripkeModel.build(worlds, parts, val)


# -- acceptance summary ---------------------------------------------------------

_CRITERIA = {}


def pytest_runtest_logreport(report):
    mark = getattr(report, "criterion", None)
    if mark is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _CRITERIA[mark[0]] = (mark[1], report.outcome, report.duration)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, outcome, secs = _CRITERIA[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {n:>2}: {title} ({secs:.2f} s)")
