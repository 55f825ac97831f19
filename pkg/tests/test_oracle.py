import random

from carc import oracle
from carc.graphs import Graph


def test_arc_model_counts():
    assert len(list(oracle.gen_arc_models(1))) == 1
    # 3! orders of the remaining letters after v0^0
    assert len(list(oracle.gen_arc_models(2))) == 6


def test_arc_graph_edges():
    assert oracle.arc_graph_edges(((0, 0), (1, 0), (0, 1), (1, 1))) == [(0, 1)]
    assert oracle.arc_graph_edges(((0, 0), (0, 1), (1, 0), (1, 1))) == []


def test_brute_iso():
    p4 = Graph(4, [(0, 1), (1, 2), (2, 3)])
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert oracle.brute_iso(p4, p4)
    assert oracle.brute_iso(p4, Graph(4, [(2, 0), (0, 3), (3, 1)]))
    assert not oracle.brute_iso(p4, star)


def test_brute_modules():
    p4 = Graph(4, [(0, 1), (1, 2), (2, 3)])
    trivial = {frozenset({v}) for v in range(4)} | {frozenset(range(4))}
    assert oracle.brute_modules(p4) == trivial
    k4 = Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    assert len(oracle.brute_modules(k4)) == 2**4 - 1


def test_orientation_count():
    # a path on three vertices has two transitive orientations
    assert oracle.brute_orientation_count(Graph(3, [(0, 1), (1, 2)])) == 2
    assert oracle.brute_orientation_count(Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])) == 2
    assert oracle.brute_orientation_count(Graph(3, [(0, 1), (1, 2), (0, 2)])) == 6


def test_corpus_is_reduced_and_distinct():
    models = oracle.build_corpus(5)
    for i, a in enumerate(models):
        assert not oracle.has_twins_or_universal(oracle._adjacency(a.graph))
        for b in models[:i]:
            assert not oracle.brute_iso(a.graph, b.graph)


def test_corpus_cache_round_trip(tmp_path):
    path = tmp_path / "corpus.txt"
    built = oracle.corpus(4, path)
    assert path.read_text().startswith("# n<=4 ")
    again = oracle.corpus(4, path)
    assert [m.word for m in again] == [m.word for m in built]
    assert [m.graph for m in again] == [m.graph for m in built]


def test_relabel_keeps_shape():
    rng = random.Random(1)
    m = oracle.random_arc_model(6, rng)
    perm = oracle.random_permutation(6, rng)
    r = oracle.relabel_model(m, perm)
    assert oracle.brute_iso(m.graph, r.graph)
    assert all(r.graph.has_edge(perm[u], perm[v]) for u, v in m.graph.edges())
