"""Simple graphs, neighborhood pair relations, overlap graphs and (G, m, u) representations."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class Graph:
    """Undirected simple graph on vertices 0..n-1 with bitset adjacency."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        self.n = n
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.adj: tuple[int, ...] = tuple(adj)

    @classmethod
    def from_bitsets(cls, adj: Iterable[int]) -> "Graph":
        g = cls(0)
        g.adj = tuple(adj)
        g.n = len(g.adj)
        return g

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> set[int]:
        return set(bits(self.adj[v]))

    def closed(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1) << (u + 1)):
                yield (u, v)

    def edge_count(self) -> int:
        return sum(bin(a).count("1") for a in self.adj) // 2

    def complement(self) -> "Graph":
        full = self.full
        return Graph.from_bitsets((~a & full) & ~(1 << v) for v, a in enumerate(self.adj))

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled 0..k-1, with the list new -> old."""
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        edges = [(index[u], index[v]) for u in old for v in bits(self.adj[u]) if v in index and u < v]
        return Graph(len(old), edges), old

    def relabel(self, perm: list[int]) -> "Graph":
        """Graph with vertex v renamed perm[v]."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def components(self, within: int | None = None) -> list[int]:
        """Connected components (as bitsets) of the subgraph induced by `within`."""
        rest = self.full if within is None else within
        out = []
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                v = frontier.bit_length() - 1
                frontier &= ~(1 << v)
                new = self.adj[v] & rest & ~comp
                comp |= new
                frontier |= new
            out.append(comp)
            rest &= ~comp
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self) -> int:
        return hash(self.adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges())})"


def bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class PairRelation(enum.Enum):
    DISJOINT = "disjoint"
    CONTAINS = "contains"
    CONTAINED_IN = "contained_in"
    COVER_CIRCLE = "cover_circle"
    OVERLAP = "overlap"


LEFT_RELATIONS = (PairRelation.CONTAINS, PairRelation.COVER_CIRCLE)
RIGHT_RELATIONS = (PairRelation.DISJOINT, PairRelation.CONTAINED_IN)


def _proper_subset(a: int, b: int) -> bool:
    return a != b and a & ~b == 0


def classify_pair(G: Graph, v: int, u: int) -> PairRelation:
    """The relation `v <rel> u` forced by closed neighborhoods in G."""
    if u == v:
        raise ValueError("classify_pair needs two distinct vertices")
    if not G.has_edge(v, u):
        return PairRelation.DISJOINT
    nv, nu = G.closed(v), G.closed(u)
    if _proper_subset(nu, nv):
        return PairRelation.CONTAINS
    if _proper_subset(nv, nu):
        return PairRelation.CONTAINED_IN
    if nv | nu == G.full:
        ok = all(_proper_subset(G.closed(w), nv) for w in bits(nv & ~nu))
        ok = ok and all(_proper_subset(G.closed(w), nu) for w in bits(nu & ~nv))
        if ok:
            return PairRelation.COVER_CIRCLE
    return PairRelation.OVERLAP


def relation_matrix(G: Graph) -> list[list[PairRelation | None]]:
    return [[None if u == v else classify_pair(G, v, u) for u in range(G.n)] for v in range(G.n)]


def left_right_sets(G: Graph, v: int) -> tuple[set[int], set[int]]:
    left, right = set(), set()
    for u in range(G.n):
        if u == v:
            continue
        r = classify_pair(G, v, u)
        if r in LEFT_RELATIONS:
            left.add(u)
        elif r in RIGHT_RELATIONS:
            right.add(u)
    return left, right


def twin_classes(G: Graph) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for v in range(G.n):
        groups.setdefault(G.closed(v), []).append(v)
    return sorted(groups.values())


def universal_vertices(G: Graph) -> list[int]:
    return [v for v in range(G.n) if G.closed(v) == G.full]


def is_reduced(G: Graph) -> bool:
    """True when G has neither twins nor universal vertices."""
    return not universal_vertices(G) and all(len(c) == 1 for c in twin_classes(G))


class ReducedGraphRequired(ValueError):
    pass


def overlap_graph(G: Graph) -> Graph:
    if not is_reduced(G):
        raise ReducedGraphRequired("overlap graph needs a graph without twins and universal vertices")
    edges = [(u, v) for u, v in G.edges() if classify_pair(G, u, v) is PairRelation.OVERLAP]
    return Graph(G.n, edges)


@dataclass(frozen=True)
class Representation:
    base: Graph
    mult: dict[int, int]
    universals: int
    # base vertex i stands for source vertex origin[i]; classes[i] lists its twins
    origin: list[int] = field(default_factory=list)
    classes: list[list[int]] = field(default_factory=list)

    def expand(self) -> Graph:
        """Rebuild a graph isomorphic to the source from (base, mult, universals)."""
        owner = []
        for i in range(self.base.n):
            owner += [i] * self.mult[i]
        k = len(owner)
        n = k + self.universals
        edges = []
        for a in range(k):
            for b in range(a + 1, k):
                if owner[a] == owner[b] or self.base.has_edge(owner[a], owner[b]):
                    edges.append((a, b))
        for x in range(k, n):
            edges += [(y, x) for y in range(x)]
        return Graph(n, edges)


def compute_representation(Gp: Graph) -> Representation:
    """Collapse twin classes and drop universal vertices.

    Closed-neighborhood classes are exactly the leaf children of serial
    strong modules, so grouping by N[v] gives the same classes.
    """
    univ = set(universal_vertices(Gp))
    classes = [c for c in twin_classes(Gp) if c[0] not in univ]
    origin = [c[0] for c in classes]
    base, _ = Gp.induced(origin)
    return Representation(
        base=base,
        mult={i: len(c) for i, c in enumerate(classes)},
        universals=len(univ),
        origin=origin,
        classes=classes,
    )
