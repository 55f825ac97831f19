import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from carc import oracle
from carc.graphs import Graph, PairRelation as R, classify_pair, is_reduced
from carc.models import (
    ArcModel,
    ChordModel,
    NotConformal,
    Violation,
    arc_relation,
    arcs_to_chords,
    check_conformal,
    check_normalized,
    chords_to_arcs,
    intersection_graph,
    normalize,
    normalize_with_trace,
)
from carc.words import CircularWord, Letter, reflect, restrict

from conftest import named_word

# P4 as intervals a=[1,4], b=[3,6], c=[5,8], d=[7,10] on a 12-unit circle
P4_WORD = named_word("a0 b0 a1 c0 b1 d0 c1 d1")


def test_arc_patterns():
    w = named_word("a0 b0 b1 a1")
    assert arc_relation(w, 0, 1) is R.CONTAINS
    assert arc_relation(w, 1, 0) is R.CONTAINED_IN
    assert arc_relation(named_word("a0 a1 b0 b1"), 0, 1) is R.DISJOINT
    assert arc_relation(named_word("a0 b0 a1 b1"), 0, 1) is R.OVERLAP
    assert arc_relation(named_word("a0 b1 b0 a1"), 0, 1) is R.COVER_CIRCLE


def test_p4_interval_model_is_not_normalized():
    m = ArcModel.from_word(P4_WORD)
    assert Violation(1, 0, R.CONTAINS, R.OVERLAP) in check_normalized(m.graph, m)


def test_p4_normalization():
    m = ArcModel.from_word(P4_WORD)
    out = normalize(m.graph, m)
    assert check_normalized(m.graph, out) == []
    a, b, c, d = range(4)
    assert arc_relation(out.word, b, a) is R.CONTAINS
    assert arc_relation(out.word, c, d) is R.CONTAINS
    assert arc_relation(out.word, b, c) is R.COVER_CIRCLE


def test_mismatched_graph_is_reported():
    m = ArcModel.from_word(P4_WORD)
    wrong = Graph(4, [(0, 1)])
    assert check_normalized(wrong, m)[0].kind == "intersection_mismatch"


def test_worked_model_is_normalized(worked_model):
    assert check_normalized(worked_model.graph, worked_model) == []


def _arc_inside(outer, inner, length):
    s, e = outer
    off = lambda x: (x - s) % length
    return off(inner[0]) <= off(inner[1]) <= off(e)


def _extension_only(res, n, length):
    for v in range(n):
        old = (res.before[Letter(v, 0)], res.before[Letter(v, 1)])
        new = (res.after[Letter(v, 0)], res.after[Letter(v, 1)])
        if not _arc_inside(new, old, length):
            return False
    return True


arc_words = st.integers(2, 8).flatmap(
    lambda n: st.permutations([Letter(v, j) for v in range(n) for j in (0, 1)])
)


@settings(max_examples=150, suppress_health_check=[HealthCheck.filter_too_much])
@given(arc_words)
def test_normalize_contract(seq):
    m = ArcModel.from_word(seq)
    assume(is_reduced(m.graph))
    res = normalize_with_trace(m.graph, m)
    assert check_normalized(m.graph, res.model) == []
    assert intersection_graph(res.model.word) == m.graph
    assert _extension_only(res, m.graph.n, len(m.word))
    assert normalize(m.graph, res.model).word == res.model.word


def test_normalize_rejects_twins():
    m = ArcModel.from_word(named_word("a0 b0 a1 b1"))
    with pytest.raises(ValueError):
        normalize(m.graph, m)


def test_check_conformal_interleaving():
    c5 = Graph(5, [(i, (i + 1) % 5) for i in range(5)])
    assert check_conformal(c5, named_word("a0 b0 a1 b1"), {0, 1})
    assert not check_conformal(c5, named_word("a0 a1 b0 b1"), {0, 1})


def test_conformal_is_hereditary(worked_tree):
    from carc.enumeration import enumerate_conformal

    G = worked_tree.graph
    for w in enumerate_conformal(worked_tree):
        for U in itertools.combinations(range(G.n), 3):
            assert check_conformal(G, restrict(w, U), U)


def test_round_trip_and_rejection(worked_model):
    ch = arcs_to_chords(worked_model)
    assert ch.word == worked_model.word
    assert check_conformal(worked_model.graph, ch.word)
    assert chords_to_arcs(ch, worked_model.graph) == worked_model
    # mirror image without swapping superscripts turns every left side into a right side
    bad = ChordModel(CircularWord(reversed(ch.word.letters)), ch.graph)
    with pytest.raises(NotConformal):
        chords_to_arcs(bad, worked_model.graph)


def test_reflection_commutes_with_conversion(worked_model):
    r = ArcModel.from_word(reflect(worked_model.word))
    assert arcs_to_chords(r).word == reflect(arcs_to_chords(worked_model).word)


def test_normalized_and_conformal_models_coincide(corpus5):
    # over all arc words of small graphs: normalized arc models are exactly the conformal chord models
    small = [m for m in corpus5 if m.graph.n <= 4]
    for m in small:
        normalized = set()
        for cand in oracle.gen_arc_models(m.graph.n):
            if cand.graph == m.graph and check_normalized(m.graph, cand) == []:
                normalized.add(cand.word)
        assert normalized == oracle.brute_conformal_models(m.graph)
