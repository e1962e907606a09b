import random

import pytest

from pal.formula import And, Atom, agents, as_single_term, atoms
from pal.generate import STATIC_NODES, random_formula
from pal.kripke import KripkeModel, is_induced_submodel, truth_set
from pal.oracle import (
    NonContingentBody,
    PreconditionViolated,
    SearchBounds,
    SearchError,
    bell,
    build_conj_chain_countermodel,
    build_figure3_model,
    build_glued_countermodel,
    build_klsimple_countermodel,
    build_padded_countermodel,
    check_supermodel_preservation,
    count_models,
    enumerate_models,
    find_satisfying_model,
    find_selfref_counterexample,
    find_success_counterexample,
    is_self_refuting_on,
    is_successful_on,
    is_super_successful_on,
    refutes_success,
    restricted_growth_strings,
)
from pal.oracle.search import chain_frames
from pal.parser import parse

p, q = Atom("p"), Atom("q")


class TestEnumeration:
    @pytest.mark.parametrize("n, b", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203), (7, 877)])
    def test_bell(self, n, b):
        assert bell(n) == b
        assert len(restricted_growth_strings(n)) == b

    def test_rgs_lexicographic(self):
        assert restricted_growth_strings(3) == ((0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2))

    @pytest.mark.parametrize("n, k, m", [(1, 2, 1), (2, 2, 1), (3, 2, 1), (3, 1, 2), (2, 3, 2)])
    def test_count_and_distinct(self, n, k, m):
        ags = ["a", "b", "c"][:k]
        props = ["p", "q"][:m]
        ms = list(enumerate_models(n, ags, props))
        assert len(ms) == count_models(n, k, m) == bell(n) ** k * 2 ** (n * m)
        keys = {m_.to_json() for m_ in ms}
        assert len(keys) == len(ms)
        assert all(m_.validate() == [] for m_ in ms)

    def test_chain_frames_are_paths(self):
        frames = list(chain_frames(4, ["a", "b"]))
        assert len(frames) == 2**3
        for labels, _ in frames:
            assert len(labels) == 3


def _brute_first(f, n_max, ags, pred):
    props = sorted(atoms(f))
    for n in range(1, n_max + 1):
        for m in enumerate_models(n, ags, props):
            sat = truth_set(m, f)
            after = truth_set(m.submodel(sat), f)
            for w in m.worlds:
                if pred(w, sat, after):
                    return m, w
    return None


class TestSearchAgreesWithBruteForce:
    """The vectorized search and a naive loop over the same family agree exactly."""

    @pytest.mark.parametrize("seed", range(40))
    def test_success(self, seed):
        rng = random.Random(seed)
        f = random_formula(rng, 3, ("a", "b"), ("p", "q"))
        ags = sorted(agents(f)) or ["a"]
        report = find_success_counterexample(f, SearchBounds(3, ags))
        brute = _brute_first(f, 3, ags, lambda w, s, a: w in s and w not in a)
        assert report.found == (brute is not None)
        if brute:
            assert report.witness.model == brute[0]
            assert report.witness.point == brute[1]

    @pytest.mark.parametrize("seed", range(20))
    def test_selfref(self, seed):
        rng = random.Random(1000 + seed)
        f = random_formula(rng, 3, ("a", "b"), ("p",))
        ags = sorted(agents(f)) or ["a"]
        report = find_selfref_counterexample(f, SearchBounds(3, ags))
        brute = _brute_first(f, 3, ags, lambda w, s, a: w in s and w in a)
        assert report.found == (brute is not None)
        if brute:
            assert (report.witness.model, report.witness.point) == brute

    @pytest.mark.parametrize("seed", range(20))
    def test_announcements_and_common(self, seed):
        rng = random.Random(2000 + seed)
        f = random_formula(rng, 3, ("a", "b"), ("p",), nodes=STATIC_NODES + ("common", "announce", "top"))
        ags = sorted(agents(f)) or ["a"]
        report = find_satisfying_model(f, SearchBounds(3, ags))
        brute = _brute_first(f, 3, ags, lambda w, s, a: w in s)
        assert report.found == (brute is not None)
        if brute:
            assert (report.witness.model, report.witness.point) == brute


class TestSearch:
    def test_klsimple_first_witness(self):
        r = find_success_counterexample(parse("K_1 L_2 p"), SearchBounds(4, ("1", "2")))
        assert r.outcome == "Found"
        assert len(r.witness.model.worlds) == 3
        assert refutes_success(r.witness, parse("K_1 L_2 p"))

    def test_moore(self):
        r = find_success_counterexample(parse("p & ~K_b p"), SearchBounds(3, ("b",)))
        assert len(r.witness.model.worlds) == 2

    def test_none_up_to_bound(self):
        r = find_success_counterexample(parse("K_1 K_2 p"), SearchBounds(4, ("1", "2")))
        assert r.outcome == "NoneUpToBound"
        assert r.models_examined == sum(count_models(n, 2, 1) for n in range(1, 5))
        assert "note" in r.to_dict()

    def test_stable_report_is_deterministic(self):
        f = parse("K_1 L_2 p")
        a = find_success_counterexample(f, SearchBounds(4, ("1", "2"))).to_dict(stable=True)
        b = find_success_counterexample(f, SearchBounds(4, ("1", "2"))).to_dict(stable=True)
        assert a == b and "elapsed" not in a

    def test_chain_family_finds_figure2_shape(self):
        r = find_success_counterexample(parse("K_1 L_2 p"), SearchBounds(4, ("1", "2"), "chain"))
        assert r.found

    def test_random_tree_seeded(self):
        f = parse("K_1 L_2 p")
        bounds = SearchBounds(6, ("1", "2"), "random-tree", samples=2000, seed=7)
        a = find_success_counterexample(f, bounds).to_dict(stable=True)
        b = find_success_counterexample(f, bounds).to_dict(stable=True)
        assert a == b
        assert a["outcome"] == "Found"

    def test_selfref_moore(self):
        f = parse("p & ~K_b p")
        r = find_selfref_counterexample(f, SearchBounds(4, ("b",)))
        assert not r.found

    def test_bounds_must_cover_formula_agents(self):
        with pytest.raises(PreconditionViolated):
            find_success_counterexample(parse("K_1 L_2 p"), SearchBounds(3, ("1",)))

    def test_extra_agents_allowed(self):
        assert find_success_counterexample(parse("K_1 L_2 p"), SearchBounds(3, ("1", "2", "3"))).found

    def test_chain_rejects_announcements(self):
        with pytest.raises(PreconditionViolated):
            find_success_counterexample(parse("[p] K_a p"), SearchBounds(3, ("a",), "chain"))

    @pytest.mark.parametrize(
        "kwargs",
        [dict(max_worlds=0), dict(max_worlds=17), dict(max_worlds=3, strategy="bfs"), dict(max_worlds=3, min_worlds=4)],
    )
    def test_bad_bounds(self, kwargs):
        with pytest.raises(SearchError):
            SearchBounds(**kwargs)


class TestChecks:
    def test_figure1(self, fig1):
        f = parse("p & ~K_b p")
        assert not is_successful_on(fig1, f)
        assert is_self_refuting_on(fig1, f)

    def test_figure2(self, fig2):
        f = parse("K_1 L_2 p")
        assert not is_successful_on(fig2, f)
        assert is_self_refuting_on(fig2, f)

    def test_super_success_implies_success(self):
        rng = random.Random(5)
        ms = list(enumerate_models(3, ["a", "b"], ["p"]))
        for _ in range(200):
            f = random_formula(rng, 3, ("a", "b"), ("p",))
            m = rng.choice(ms)
            if is_super_successful_on(m, f):
                assert is_successful_on(m, f)

    def test_super_success_stricter_than_success(self):
        # fine after the update itself, broken once v2 is kept as well
        m = KripkeModel.build(["v1", "v2", "v3"], {"a": [["v1", "v2"]], "b": [["v1", "v2", "v3"]]}, {"p": ["v1", "v3"]})
        f = parse("K_a p & K_b L_a p")
        assert truth_set(m, f) == {"v3"}
        assert is_successful_on(m, f)
        assert not is_super_successful_on(m, f)


class TestSupermodel:
    def test_fragment_member_preserved(self):
        r = check_supermodel_preservation(parse("L_a (p | q) & ~[L_b p] ~q"), SearchBounds(3, ("a", "b")))
        assert not r.found

    def test_knowledge_not_preserved(self):
        r = check_supermodel_preservation(parse("K_a p"), SearchBounds(3, ("a",)))
        assert r.found
        assert is_induced_submodel(r.witness.model, r.supermodel)
        assert r.witness.point in truth_set(r.witness.model, parse("K_a p"))
        assert r.witness.point not in truth_set(r.supermodel, parse("K_a p"))

    def test_random_tree_rejected(self):
        with pytest.raises(PreconditionViolated):
            check_supermodel_preservation(parse("p"), SearchBounds(3, ("a",), "random-tree"))


class TestBuilders:
    @pytest.mark.parametrize("text", ["K_1 L_2 p", "L_3 K_1 K_4 L_2 L_5 (p & q)", "K_1 L_2 L_3 K_4 ~p"])
    def test_klsimple(self, text):
        v = as_single_term(parse(text))
        pm = build_klsimple_countermodel(v)
        assert len(pm.model.worlds) == 4
        assert refutes_success(pm, v.formula)

    def test_klsimple_rejects_other_shapes(self):
        with pytest.raises(PreconditionViolated):
            build_klsimple_countermodel(as_single_term(parse("L_1 K_2 p")))

    @pytest.mark.parametrize(
        "alpha, lseq, beta",
        [(p, ("1", "2"), q), (q, ("1",), p), (p, ("1", "2", "3"), Atom("r"))],
    )
    def test_conj_chain(self, alpha, lseq, beta):
        pm = build_conj_chain_countermodel(alpha, lseq, beta)
        assert pm.model.validate() == []

    def test_conj_chain_needs_contingent_alpha(self):
        with pytest.raises(NonContingentBody):
            build_conj_chain_countermodel(parse("p | ~p"), ("1", "2"), q)

    def test_conj_chain_alpha_entails_beta(self):
        with pytest.raises(PreconditionViolated):
            build_conj_chain_countermodel(And(p, q), ("1", "2"), p)

    def test_glued(self):
        left = as_single_term(parse("K_1 L_2 p"))
        right = as_single_term(parse("K_3 L_4 q"))
        pm = build_glued_countermodel(left, right)
        assert refutes_success(pm, And(left.formula, right.formula))

    def test_padded(self):
        bad = as_single_term(parse("K_1 L_2 p"))
        other = parse("K_3 q")
        pm = build_padded_countermodel(bad, other)
        assert refutes_success(pm, And(bad.formula, other))

    def test_figure3_model(self, fig3):
        m = build_figure3_model()
        assert m.same_as(fig3)
        assert truth_set(m, parse("K_1 K_2 L_1 p")) == {"w1", "w2"}
        assert is_successful_on(m, parse("K_1 K_2 L_1 p"))

