"""Canonical forms of circular-arc graphs computed from the PQSM-tree."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional, Sequence

from .graphs import Graph, compute_representation
from .models import ArcModel, arcs_to_chords, intersection_graph, normalize
from .moddecomp import Kind, MDNode
from .pqsm import PQSMTree, PQSTree, build_pqsm, is_p, is_slot, m_node_orderings
from .words import CircularWord, Letter, least_rotation_index, reflect


# --- sorting routines -------------------------------------------------------------


def least_rotation(t: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least rotation of a tuple (Booth)."""
    t = tuple(t)
    k = least_rotation_index(t)
    return t[k:] + t[:k]


def sort_tuple_entries(ts: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Sort the entries inside every tuple with one shared counting pass."""
    if not ts:
        return []
    top = max((max(t) for t in ts if t), default=0)
    buckets: list[list[int]] = [[] for _ in range(top + 1)]
    for i, t in enumerate(ts):
        for x in t:
            buckets[x].append(i)
    out: list[list[int]] = [[] for _ in ts]
    for value, owners in enumerate(buckets):
        for i in owners:
            out[i].append(value)
    return [tuple(o) for o in out]


def lex_sort_tuples(ts: Sequence[Sequence[int]]) -> tuple[list[int], list[int]]:
    """Radix sort of variable-length tuples.

    Returns (order, group): `order` lists input indices in lexicographic
    order and `group[i]` numbers the distinct tuples 0, 1, ... in that order.
    """
    n = len(ts)
    if n == 0:
        return [], []
    width = max(len(t) for t in ts)
    top = max((max(t) for t in ts if t), default=0)
    by_len: list[list[int]] = [[] for _ in range(width + 1)]
    for i, t in enumerate(ts):
        by_len[len(t)].append(i)
    order: list[int] = []
    # from the last position to the first; tuples join once long enough to
    # have that position, placed ahead of the rest so shorter sorts first
    for p in range(width - 1, -1, -1):
        order = by_len[p + 1] + order
        buckets: list[list[int]] = [[] for _ in range(top + 1)]
        for i in order:
            buckets[ts[i][p]].append(i)
        order = [i for b in buckets for i in b]
    order = by_len[0] + order
    group = [0] * n
    g = -1
    prev: Optional[tuple] = None
    for i in order:
        cur = tuple(ts[i])
        if cur != prev:
            g += 1
            prev = cur
        group[i] = g
    return order, group


# --- table --------------------------------------------------------------------------


@dataclass
class CanonTable:
    entries: list[tuple[int, ...]] = field(default_factory=list)
    num: dict[Hashable, int] = field(default_factory=dict)

    @property
    def next(self) -> int:
        return len(self.entries)

    def assign_level(self, items: list[tuple[Hashable, tuple[int, ...]]]) -> None:
        """Give equal tuples of one level equal numbers, in lexicographic order."""
        if not items:
            return
        tuples = [t for _, t in items]
        order, group = lex_sort_tuples(tuples)
        base = self.next
        seen = -1
        for i in order:
            if group[i] != seen:
                seen = group[i]
                self.entries.append(tuples[i])
        for (key, _), g in zip(items, group):
            self.num[key] = base + g


@dataclass(frozen=True)
class DualMetachord:
    rep: int
    vertices: frozenset
    flavor: int


def levels_of_metachords(tree: PQSMTree) -> dict[DualMetachord, int]:
    out = {}
    for rep, root in tree.md.items():
        stack = [(root, 0)]
        while stack:
            node, d = stack.pop()
            for f in (0, 1):
                out[DualMetachord(rep, node.vertices, f)] = d
            stack += [(c, d + 1) for c in node.children]
    return out


def _md_nodes(tree: PQSMTree) -> dict[tuple[int, frozenset], MDNode]:
    return {(rep, nd.vertices): nd for rep, root in tree.md.items() for nd in root.walk()}


def canon_metachord(
    L: DualMetachord, node: MDNode, tree: PQSMTree, ctx: CanonTable, mult: dict[int, int]
) -> tuple[int, ...]:
    Num = ctx.next
    mc = tree.metachords[L.rep]
    if node.is_leaf:
        (u,) = node.vertices
        first = mc.s0 if L.flavor == 0 else mc.s1
        return (int(Letter(u, 0) in first), mult[u] + Num)
    kids = [ctx.num[DualMetachord(L.rep, c.vertices, L.flavor)] for c in node.children]
    if node.kind is Kind.SERIAL:
        out: list[int] = []
        for i, x in enumerate(sorted(kids), start=1):
            out += [x, i + Num]
        return tuple(out)
    best = None
    for a, b in m_node_orderings(tree, L.rep, node):
        first, second = (a, b) if L.flavor == 0 else (b, a)
        pos = {c: i for i, c in enumerate(second, start=1)}
        cand: list[int] = []
        for c in first:
            cand += [kids[c], pos[c] + Num]
        cand_t = tuple(cand)
        if best is None or cand_t < best:
            best = cand_t
    return best


# --- rooted PQS-tree ------------------------------------------------------------------


@dataclass
class RootedPQS:
    pqs: PQSTree
    root: tuple
    level: dict[tuple, int]
    parent: dict[tuple, Optional[tuple]]
    centers: tuple

    def children(self, node: tuple) -> list[tuple]:
        return [x for x, p in self.parent.items() if p == node]


def _bfs(adj: dict[tuple, list[tuple]], start: tuple) -> dict[tuple, int]:
    dist = {start: 0}
    dq = deque([start])
    while dq:
        x = dq.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                dq.append(y)
    return dist


def root_pqs(pqs: PQSTree) -> RootedPQS:
    adj = pqs.adjacency()
    ecc = {x: max(_bfs(adj, x).values()) for x in adj}
    low = min(ecc.values())
    centers = tuple(sorted((x for x in adj if ecc[x] == low), key=repr))
    if len(centers) == 1:
        root = centers[0]
        dist = _bfs(adj, root)
        parent: dict[tuple, Optional[tuple]] = {root: None}
        for x in sorted(dist, key=dist.get):
            for y in adj[x]:
                if y not in parent:
                    parent[y] = x
        return RootedPQS(pqs, root, dist, parent, centers)
    a, b = centers
    root = ("R",)
    parent = {root: None, a: root, b: root}
    level = {root: 0, a: 1, b: 1}
    dq = deque([a, b])
    while dq:
        x = dq.popleft()
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                level[y] = level[x] + 1
                dq.append(y)
    return RootedPQS(pqs, root, level, parent, centers)


def _slot_num(ctx: CanonTable, x: Letter) -> int:
    return ctx.num[("slot", x.symbol[1], x.sup)]


def _encode_q(word: Sequence[Letter], ctx: CanonTable, Num: int, skip: Optional[Letter] = None) -> list[list[int]]:
    N = len(word)
    pos = {x: i for i, x in enumerate(word)}
    out = []
    for i, x in enumerate(word):
        if x == skip:
            out.append([])
        elif is_p(x):
            out.append([ctx.num[("P", x.symbol[1])]])
        else:
            partner = Letter(x.symbol, 1 - x.sup)
            dist = (pos[partner] - i) % N - 1
            out.append([_slot_num(ctx, x), dist + Num])
    return out


def canon_qnode(q: int, rooted: RootedPQS, ctx: CanonTable) -> tuple[int, ...]:
    pqs = rooted.pqs
    Num = ctx.next
    node = ("Q", q)
    if node == rooted.root and pqs.kind == "serial":
        pairs = []
        for m in pqs.modules:
            a, b = ctx.num[("slot", m.representant, 0)], ctx.num[("slot", m.representant, 1)]
            pairs.append((min(a, b), max(a, b)))
        pairs.sort()
        t = len(pairs)
        out: list[int] = []
        for a, _ in pairs:
            out += [a, Num + t - 1]
        for _, b in pairs:
            out += [b, Num + t - 1]
        return tuple(out)
    w = pqs.qorder[q]
    parent = rooted.parent[node]
    if parent == ("R",):
        # the other center plays the parent
        parent = next(c for c in rooted.centers if c != node)
    best = None
    for cand in (w, reflect(w)):
        letters = list(cand.letters)
        if parent is not None and parent[0] == "P":
            k = letters.index(Letter(("P", parent[1]), None))
            letters = letters[k:] + letters[:k]
            enc = _encode_q(letters, ctx, Num, skip=letters[0])
            flat = tuple(x for e in enc for x in e)
        else:
            enc = _encode_q(letters, ctx, Num)
            flat = least_rotation([x for e in enc for x in e])
        if best is None or flat < best:
            best = flat
    return best


def canon_pnode(p: int, rooted: RootedPQS, ctx: CanonTable) -> tuple[int, ...]:
    kids = [ctx.num[("Q", c[1])] for c in rooted.children(("P", p))]
    return sort_tuple_entries([kids])[0]


# --- pipeline -------------------------------------------------------------------------


def _relabel_word(word: CircularWord, origin: list[int]) -> CircularWord:
    index = {v: i for i, v in enumerate(origin)}
    return CircularWord(Letter(index[x.symbol], x.sup) for x in word.letters if x.symbol in index)


def prepare(model: ArcModel) -> tuple[int, dict[int, int], Optional[PQSMTree]]:
    """Representation, normalized base model and PQSM-tree of an arc model."""
    rep = compute_representation(model.graph)
    if rep.base.n == 0:
        return rep.universals, {}, None
    word = _relabel_word(model.word, rep.origin)
    if intersection_graph(word) != rep.base:
        raise ValueError("restricted model does not realize the base graph")
    normal = normalize(rep.base, ArcModel(word, rep.base))
    tree = build_pqsm(rep.base, arcs_to_chords(normal))
    return rep.universals, dict(rep.mult), tree


def canon_table(tree: PQSMTree, mult: dict[int, int]) -> CanonTable:
    ctx = CanonTable()
    nodes = _md_nodes(tree)
    levels = levels_of_metachords(tree)
    for lv in range(max(levels.values()), -1, -1):
        items = []
        for L in sorted((L for L, d in levels.items() if d == lv), key=lambda L: (L.rep, sorted(L.vertices), L.flavor)):
            items.append((L, canon_metachord(L, nodes[(L.rep, L.vertices)], tree, ctx, mult)))
        ctx.assign_level(items)
    for m in tree.pqs.modules:
        for f in (0, 1):
            ctx.num[("slot", m.representant, f)] = ctx.num[DualMetachord(m.representant, m.vertices, f)]
    rooted = root_pqs(tree.pqs)
    depth = max(rooted.level.values())
    for lv in range(depth, -1, -1):
        items = []
        for node in sorted((x for x, d in rooted.level.items() if d == lv), key=repr):
            if node[0] == "Q":
                items.append((node, canon_qnode(node[1], rooted, ctx)))
            elif node[0] == "P":
                items.append((node, canon_pnode(node[1], rooted, ctx)))
            elif node[0] == "R":
                a, b = rooted.centers
                pn, qn = (a, b) if a[0] == "P" else (b, a)
                items.append((node, (ctx.num[pn], ctx.num[qn])))
        ctx.assign_level(items)
    return ctx


def canonize(model: ArcModel) -> tuple[int, ...]:
    """Canonical sequence of naturals; equal exactly for isomorphic graphs.

    Layout: universals, entry count, then for each entry from the last
    (the root) down to 0: its index, its length and its values.
    """
    u, mult, tree = prepare(model)
    if tree is None:
        return (u, 0)
    ctx = canon_table(tree, mult)
    out = [u, ctx.next]
    for i in range(ctx.next - 1, -1, -1):
        e = ctx.entries[i]
        out += [i, len(e), *e]
    return tuple(out)


def isomorphic(a: ArcModel, b: ArcModel) -> bool:
    return canonize(a) == canonize(b)
