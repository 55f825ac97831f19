import itertools

import pytest
from hypothesis import given, settings, strategies as st

from carc import oracle
from carc.graphs import Graph
from carc.moddecomp import (
    Kind,
    enumerate_transitive_orientations,
    is_module,
    is_transitive,
    modular_decomposition,
    orientation_count,
    orientations_to_pm,
    pm_to_orientations,
    strong_modules,
)
from carc.words import Letter, OrientedPermutationModel

P4 = Graph(4, [(0, 1), (1, 2), (2, 3)])


def pm(t0, t1):
    return OrientedPermutationModel(tuple(Letter(v, 0) for v in t0), tuple(Letter(v, 1) for v in t1))


def test_is_module_examples():
    assert is_module(P4, {2})
    assert is_module(P4, range(4))
    assert not is_module(P4, {0, 2})
    with pytest.raises(ValueError):
        is_module(P4, set())


def test_p4_is_prime_and_edgeless_is_parallel():
    t = modular_decomposition(P4)
    assert t.kind is Kind.PRIME and all(c.is_leaf for c in t.children) and len(t.children) == 4
    t = modular_decomposition(Graph(3))
    assert t.kind is Kind.PARALLEL and len(t.children) == 3


def _p4_with_triangle():
    # P4 a-b-c-d with b blown up into a triangle {1, 4, 5}
    edges = [(0, 1), (1, 2), (2, 3), (1, 4), (1, 5), (4, 5), (0, 4), (0, 5), (4, 2), (5, 2)]
    return Graph(6, edges)


def test_prime_root_with_serial_child():
    G = _p4_with_triangle()
    t = modular_decomposition(G)
    assert t.kind is Kind.PRIME and len(t.children) == 4
    serial = [c for c in t.children if c.kind is Kind.SERIAL]
    assert len(serial) == 1 and len(serial[0].children) == 3
    assert orientation_count(t) == 2 * 6 == oracle.brute_orientation_count(G)
    assert len(enumerate_transitive_orientations(G, t)) == 12


def test_serial_three_children_and_prime_reverse_pair():
    K3 = Graph(3, [(0, 1), (0, 2), (1, 2)])
    assert len(enumerate_transitive_orientations(K3, modular_decomposition(K3))) == 6
    a, b = enumerate_transitive_orientations(P4, modular_decomposition(P4))
    assert b == {(y, x) for x, y in a}


def test_parallel_node_has_one_orientation():
    G = Graph(3)
    assert enumerate_transitive_orientations(G, modular_decomposition(G)) == [frozenset()]


def test_non_comparability_graph_gives_nothing():
    c5 = Graph(5, [(i, (i + 1) % 5) for i in range(5)])
    assert enumerate_transitive_orientations(c5, modular_decomposition(c5)) == []


def test_pm_to_orientations_examples():
    K2, E2 = Graph(2, [(0, 1)]), Graph(2)
    assert pm_to_orientations(pm([0, 1], [0, 1]), K2) == (frozenset(), frozenset({(0, 1)}))
    assert pm_to_orientations(pm([0, 1], [1, 0]), E2) == (frozenset({(0, 1)}), frozenset())
    with pytest.raises(ValueError):
        pm_to_orientations(pm([0, 1], [0, 1]), E2)


def test_orientations_to_pm_examples():
    assert orientations_to_pm({(0, 1), (1, 2), (0, 2)}, set()) == pm([0, 1, 2], [2, 1, 0])
    assert orientations_to_pm(set(), {(0, 1), (1, 2), (0, 2)}) == pm([0, 1, 2], [0, 1, 2])
    with pytest.raises(ValueError):
        orientations_to_pm({(0, 1), (1, 0)}, set())


def _graph_of(t0, t1):
    i1 = {v: i for i, v in enumerate(t1)}
    n = len(t0)
    return Graph(n, [(min(a, b), max(a, b)) for i, a in enumerate(t0) for b in t0[i + 1 :] if i1[a] < i1[b]])


def test_round_trip_on_all_small_permutation_models():
    for n in range(1, 5):
        for t1 in itertools.permutations(range(n)):
            t0 = tuple(range(n))
            G = _graph_of(t0, t1)
            p = pm(t0, t1)
            lt, prec = pm_to_orientations(p, G)
            assert is_transitive(set(lt)) and is_transitive(set(prec))
            assert orientations_to_pm(lt, prec, range(n)) == p


def test_strong_modules_contiguous_in_generated_models():
    for n in range(1, 6):
        for t1 in itertools.permutations(range(n)):
            G = _graph_of(tuple(range(n)), t1)
            t = modular_decomposition(G)
            lt, _ = pm_to_orientations(pm(range(n), t1), G)
            for prec in enumerate_transitive_orientations(G, t):
                p = orientations_to_pm(lt, prec, range(n))
                for M in strong_modules(t):
                    for tau in (p.tau0, p.tau1):
                        idx = [i for i, x in enumerate(tau) if x.symbol in M]
                        assert idx[-1] - idx[0] == len(idx) - 1


def test_strong_modules_match_brute_force_exhaustively():
    for n in range(1, 6):
        for G in oracle.all_graphs(n):
            assert strong_modules(modular_decomposition(G)) == oracle.brute_strong_modules(G)


graphs = st.integers(1, 7).flatmap(
    lambda n: st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1])).map(
        lambda es: Graph(n, es)
    )
)


@settings(max_examples=80)
@given(graphs)
def test_node_kinds_and_partition(G):
    t = modular_decomposition(G)
    assert t.vertices == frozenset(range(G.n))
    comp = G.complement()
    for node in t.walk():
        if node.is_leaf:
            assert len(node.vertices) == 1
            continue
        parts = [c.vertices for c in node.children]
        assert frozenset().union(*parts) == node.vertices and sum(map(len, parts)) == len(node.vertices)
        disconnected = len(G.components(sum(1 << v for v in node.vertices))) > 1
        co_disconnected = len(comp.components(sum(1 << v for v in node.vertices))) > 1
        assert (node.kind is Kind.PARALLEL) == disconnected
        assert (node.kind is Kind.SERIAL) == co_disconnected
    assert strong_modules(t) == oracle.brute_strong_modules(G)
