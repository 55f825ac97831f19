"""Modular decomposition and transitive orientations."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .graphs import Graph, bits, mask
from .words import Letter, OrientedPermutationModel, symbol_key

Orientation = frozenset  # of ordered vertex pairs (x, y) meaning x before y


class Kind(enum.Enum):
    LEAF = "leaf"
    SERIAL = "serial"
    PARALLEL = "parallel"
    PRIME = "prime"


@dataclass(frozen=True)
class MDNode:
    kind: Kind
    vertices: frozenset
    children: tuple["MDNode", ...] = ()

    def walk(self) -> Iterator["MDNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def postorder(self) -> Iterator["MDNode"]:
        for c in self.children:
            yield from c.postorder()
        yield self

    @property
    def is_leaf(self) -> bool:
        return self.kind is Kind.LEAF

    def depth(self) -> int:
        return 0 if not self.children else 1 + max(c.depth() for c in self.children)

    def __repr__(self) -> str:
        if self.is_leaf:
            (v,) = self.vertices
            return repr(v)
        inner = ", ".join(repr(c) for c in self.children)
        return f"{self.kind.value}({inner})"


class NotComparable(ValueError):
    pass


def is_module(G: Graph, X: Iterable[int]) -> bool:
    xm = mask(X)
    if xm == 0:
        raise ValueError("module test needs a nonempty set")
    for v in bits(G.full & ~xm):
        seen = G.adj[v] & xm
        if seen and seen != xm:
            return False
    return True


def _module_closure(G: Graph, seed: int, within: int) -> int:
    """Least module of G[within] containing `seed`."""
    m = seed
    changed = True
    while changed:
        changed = False
        for x in bits(within & ~m):
            seen = G.adj[x] & m
            if seen and seen != m:
                m |= 1 << x
                changed = True
    return m


def _node(G: Graph, X: int) -> MDNode:
    verts = list(bits(X))
    if len(verts) == 1:
        return MDNode(Kind.LEAF, frozenset(verts))
    comps = G.components(X)
    if len(comps) > 1:
        return MDNode(Kind.PARALLEL, frozenset(verts), _sorted_children(G, comps))
    co = G.complement().components(X)
    if len(co) > 1:
        return MDNode(Kind.SERIAL, frozenset(verts), _sorted_children(G, co))
    # prime: two vertices share a child iff their least module is proper
    parts: list[int] = []
    placed = 0
    for v in verts:
        if placed >> v & 1:
            continue
        part = 1 << v
        for w in verts:
            if w != v and not placed >> w & 1 and _module_closure(G, (1 << v) | (1 << w), X) != X:
                part |= 1 << w
        placed |= part
        parts.append(part)
    return MDNode(Kind.PRIME, frozenset(verts), _sorted_children(G, parts))


def _sorted_children(G: Graph, parts: list[int]) -> tuple[MDNode, ...]:
    kids = [_node(G, p) for p in parts]
    return tuple(sorted(kids, key=lambda k: min(k.vertices)))


def modular_decomposition(G: Graph, vertices: Optional[Iterable[int]] = None) -> Optional[MDNode]:
    X = G.full if vertices is None else mask(vertices)
    if X == 0:
        return None
    return _node(G, X)


def strong_modules(t: MDNode) -> set[frozenset]:
    return {node.vertices for node in t.walk()}


def quotient_edges(G: Graph, node: MDNode) -> list[tuple[int, int]]:
    reps = [min(c.vertices) for c in node.children]
    return [(i, j) for i in range(len(reps)) for j in range(i + 1, len(reps)) if G.has_edge(reps[i], reps[j])]


# --- permutation models and orientations ------------------------------------------


def pm_to_orientations(p: OrientedPermutationModel, G: Graph) -> tuple[Orientation, Orientation]:
    """Return (lt, prec): the orientations of the non-edges and of the edges."""
    i0 = {x.symbol: i for i, x in enumerate(p.tau0)}
    i1 = {x.symbol: i for i, x in enumerate(p.tau1)}
    lt, prec = set(), set()
    vs = sorted(i0, key=symbol_key)
    for a, b in itertools.combinations(vs, 2):
        x, y = (a, b) if i0[a] < i0[b] else (b, a)
        same = i1[x] < i1[y]
        if same != G.has_edge(x, y):
            raise ValueError(f"model disagrees with adjacency of {x},{y}")
        (prec if same else lt).add((x, y))
    return frozenset(lt), frozenset(prec)


def orientations_to_pm(
    lt: Iterable[tuple], prec: Iterable[tuple], vertices: Optional[Iterable] = None,
    first_sup: Optional[dict] = None,
) -> OrientedPermutationModel:
    """Build (tau0, tau1) from orientations of the non-edges and edges.

    `first_sup[v]` picks which copy of v goes to tau0 (default v^0).
    """
    lt, prec = set(lt), set(prec)
    vs = set(vertices or ())
    for a, b in lt | prec:
        vs.update((a, b))
    order0 = lt | prec
    order1 = prec | {(b, a) for a, b in lt}
    t0 = _linearize(vs, order0)
    t1 = _linearize(vs, order1)
    sup = first_sup or {}
    return OrientedPermutationModel(
        tuple(Letter(v, sup.get(v, 0)) for v in t0),
        tuple(Letter(v, 1 - sup.get(v, 0)) for v in t1),
    )


def _linearize(vs: set, before: set) -> list:
    rank = {v: 0 for v in vs}
    for a, b in before:
        if (b, a) in before:
            raise ValueError("both directions given for one pair")
        rank[b] += 1
    order = sorted(vs, key=lambda v: rank[v])
    if sorted(rank.values()) != list(range(len(vs))):
        raise ValueError("orientations do not combine into a total order")
    for i, a in enumerate(order):
        for b in order[i + 1 :]:
            if (a, b) not in before:
                raise ValueError("orientations do not combine into a total order")
    return order


def is_transitive(pairs: set) -> bool:
    succ: dict = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    for a, b in pairs:
        for c in succ.get(b, ()):
            if (a, c) not in pairs:
                return False
    return True


def prime_quotient_orientation(H: Graph) -> frozenset:
    """One transitive orientation of a prime graph by forcing implications.

    A prime comparability graph has a single implication class, so forcing
    from any one arc must orient every edge.
    """
    edges = list(H.edges())
    if not edges:
        return frozenset()
    u, v = edges[0]
    arcs = {(u, v)}
    stack = [(u, v)]
    while stack:
        a, b = stack.pop()
        forced = [(a, c) for c in bits(H.adj[a]) if c != b and not H.has_edge(b, c)]
        forced += [(c, b) for c in bits(H.adj[b]) if c != a and not H.has_edge(a, c)]
        for arc in forced:
            if (arc[1], arc[0]) in arcs:
                raise NotComparable("forcing produced both directions of an edge")
            if arc not in arcs:
                arcs.add(arc)
                stack.append(arc)
    if len(arcs) != len(edges) or not is_transitive(arcs):
        raise NotComparable("prime quotient has no transitive orientation")
    return frozenset(arcs)


def node_orientation_choices(G: Graph, node: MDNode, prime_hint: Optional[set] = None) -> list[list[tuple[int, int]]]:
    """Per-node choices of child-level orientation, as lists of child index pairs."""
    k = len(node.children)
    if node.kind is Kind.PARALLEL or node.is_leaf:
        return [[]]
    if node.kind is Kind.SERIAL:
        return [[(p[i], p[j]) for i in range(k) for j in range(i + 1, k)] for p in itertools.permutations(range(k))]
    H = Graph(k, quotient_edges(G, node))
    base = None
    if prime_hint is not None:
        reps = [min(c.vertices) for c in node.children]
        base = {(i, j) for i in range(k) for j in range(k) if (reps[i], reps[j]) in prime_hint}
        if len(base) != H.edge_count() or not is_transitive(base):
            base = None
    if base is None:
        base = set(prime_quotient_orientation(H))
    return [sorted(base), sorted((b, a) for a, b in base)]


def enumerate_transitive_orientations(
    G: Graph, t: Optional[MDNode], prime_hint: Optional[set] = None
) -> list[Orientation]:
    """All transitive orientations of the edges of G as products of per-node choices.

    `prime_hint` (an orientation of G read from a permutation model) seeds the
    prime nodes; without it the prime quotients are oriented by forcing.
    """
    if t is None:
        return [frozenset()]
    nodes = [nd for nd in t.walk() if not nd.is_leaf]
    per_node = []
    for nd in nodes:
        try:
            choices = node_orientation_choices(G, nd, prime_hint)
        except NotComparable:
            return []
        expanded = []
        for ch in choices:
            pairs = set()
            for i, j in ch:
                for x in nd.children[i].vertices:
                    for y in nd.children[j].vertices:
                        pairs.add((x, y))
            expanded.append(pairs)
        per_node.append(expanded)
    out = []
    for combo in itertools.product(*per_node):
        out.append(frozenset().union(*combo))
    return out


def orientation_count(t: Optional[MDNode]) -> int:
    """Product of k! over serial nodes and 2 over prime nodes."""
    if t is None:
        return 1
    total = 1
    for nd in t.walk():
        if nd.kind is Kind.SERIAL:
            total *= math.factorial(len(nd.children))
        elif nd.kind is Kind.PRIME:
            total *= 2
    return total

