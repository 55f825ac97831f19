"""CA-modules, metachords, PQS-trees and PQSM-trees built from one conformal model."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graphs import Graph, bits, left_right_sets, mask
from .models import ChordModel
from .moddecomp import (
    Kind,
    MDNode,
    modular_decomposition,
    pm_to_orientations,
)
from .words import (
    CircularWord,
    Letter,
    OrientedPermutationModel,
    consistent_permutation_model,
    reflect,
    restrict,
)


class StructureError(RuntimeError):
    """The conformal model contradicts a structural property of the tree."""


@dataclass(frozen=True)
class CAModule:
    vertices: frozenset
    representant: int
    component: int


@dataclass(frozen=True)
class Metachord:
    vertices: frozenset
    representant: int
    s0: frozenset
    s1: frozenset
    lt: frozenset

    def letter_in(self, v: int, j: int) -> Letter:
        """The copy of v lying in slot j."""
        return Letter(v, 0) if Letter(v, 0) in (self.s0 if j == 0 else self.s1) else Letter(v, 1)


def slot_letter(rep: int, j: int) -> Letter:
    return Letter(("S", rep), j)


def p_letter(pid: int) -> Letter:
    return Letter(("P", pid), None)


def is_slot(x: Letter) -> bool:
    return isinstance(x.symbol, tuple) and x.symbol[0] == "S"


def is_p(x: Letter) -> bool:
    return isinstance(x.symbol, tuple) and x.symbol[0] == "P"


# --- CA-modules -----------------------------------------------------------------


def _block_tokens(word: CircularWord, groups: list[frozenset]) -> list:
    """Compress the word into (group, block) tokens, None for foreign letters."""
    owner = {}
    for gi, grp in enumerate(groups):
        pm = consistent_permutation_model(word, grp)
        for x in pm.tau0:
            owner[x] = (gi, 0)
        for x in pm.tau1:
            owner[x] = (gi, 1)
    toks: list = []
    for x in word.letters:
        t = owner.get(x)
        if not toks or toks[-1] != t:
            toks.append(t)
    if len(toks) > 1 and toks[0] == toks[-1]:
        toks.pop()
    return toks


def _maximal_unions(word: CircularWord, groups: list[frozenset]) -> list[frozenset]:
    """Inclusion-maximal unions of groups whose letters form two contiguous copies."""
    toks = _block_tokens(word, groups)
    if None not in toks:
        raise StructureError("a proper module covers the whole word")
    k = toks.index(None)
    toks = toks[k:] + toks[:k]
    where = {t: i for i, t in enumerate(toks) if t is not None}
    found: set[frozenset] = set()
    L = len(toks)
    for i in range(L):
        if toks[i] is None:
            continue
        seen: set = set()
        for j in range(i, L):
            t = toks[j]
            if t is None or t[0] in seen:
                break
            seen.add(t[0])
            partner = sorted(where[(g, 1 - b)] for g, b in toks[i : j + 1])
            if partner[-1] - partner[0] == len(partner) - 1 and all(toks[p] is not None for p in partner):
                found.add(frozenset(seen))
    maximal = [s for s in found if not any(s < o for o in found)]
    out = [frozenset().union(*(groups[g] for g in s)) for s in maximal]
    covered = sorted(v for s in out for v in s)
    if len(covered) != len(set(covered)):
        raise StructureError("maximal consistent unions overlap")
    return out


def compute_ca_modules(Gov: Graph, t: Optional[MDNode], phi: ChordModel) -> list[CAModule]:
    """Bottom-up CA-module computation over the modular decomposition of G_ov."""
    if t is None:
        return []
    word = phi.word
    comps = component_list(Gov)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}

    def visit(M: MDNode) -> tuple[list[frozenset], bool]:
        results = [visit(c) for c in M.children]
        if consistent_permutation_model(word, M.vertices) is not None:
            return [], True
        out: list[frozenset] = []
        for s, _ in results:
            out += s
        collapsed = [c.vertices for c, (_, col) in zip(M.children, results) if col]
        if M.kind is Kind.PRIME:
            out += collapsed
        elif collapsed:
            out += _maximal_unions(word, collapsed)
        return out, False

    found: list[frozenset] = []
    children = t.children if t.children else (t,)
    for child in children:
        s, _ = visit(child) if t.children else ([], True)
        found += s if s else [child.vertices]
    return sorted(
        (CAModule(frozenset(s), min(s), comp_of[min(s)]) for s in found),
        key=lambda m: m.representant,
    )


def _brute_consistent(letters: tuple, X: set) -> bool:
    """Some rotation reads block, gap, block, gap with each block one copy of X."""
    N = len(letters)
    k = len(X)
    if k == 0:
        return False
    inx = [x.symbol in X for x in letters]
    for s in range(N):
        first = [letters[(s + i) % N] for i in range(k)]
        if not all(x.symbol in X for x in first) or {x.symbol for x in first} != X:
            continue
        p = s + k
        while p < s + N and not inx[p % N]:
            p += 1
        second = [letters[(p + i) % N] for i in range(k)]
        if p + k > s + N or not all(x.symbol in X for x in second) or {x.symbol for x in second} != X:
            continue
        if all(not inx[q % N] for q in range(p + k, s + N)):
            return True
    return False


def _brute_is_module(G: Graph, X: set) -> bool:
    for v in range(G.n):
        if v in X:
            continue
        hits = {G.has_edge(v, x) for x in X}
        if len(hits) > 1:
            return False
    return True


def _brute_root_children(G: Graph) -> list[frozenset]:
    verts = range(G.n)
    mods = [
        frozenset(c)
        for r in range(1, G.n + 1)
        for c in itertools.combinations(verts, r)
        if _brute_is_module(G, set(c))
    ]
    strong = [m for m in mods if all(m <= o or o <= m or not (m & o) for o in mods)]
    proper = [m for m in strong if len(m) < G.n]
    return [m for m in proper if not any(m < o for o in proper)]


def ca_modules_definitional(Gov: Graph, phi: ChordModel) -> list[CAModule]:
    """Inclusion-maximal modules inside a root child that sit as two contiguous copies."""
    letters = phi.word.letters
    if Gov.n == 0:
        return []
    roots = _brute_root_children(Gov) if Gov.n > 1 else [frozenset({0})]
    comps = component_list(Gov)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    out = []
    for M in roots:
        good = []
        members = sorted(M)
        for r in range(1, len(members) + 1):
            for c in itertools.combinations(members, r):
                X = set(c)
                if _brute_is_module(Gov, X) and _brute_consistent(letters, X):
                    good.append(frozenset(X))
        for X in good:
            if not any(X < Y for Y in good):
                out.append(CAModule(X, min(X), comp_of[min(X)]))
    return sorted(out, key=lambda m: m.representant)


# --- metachords -----------------------------------------------------------------


def metachord_of(phi: ChordModel, S: CAModule) -> Metachord:
    pm = consistent_permutation_model(phi.word, S.vertices)
    if pm is None:
        raise StructureError(f"module {sorted(S.vertices)} is not a contiguous pair of blocks")
    lt, _ = pm_to_orientations(pm, phi.graph)
    return Metachord(S.vertices, S.representant, frozenset(pm.tau0), frozenset(pm.tau1), lt)


# --- PQS-tree ---------------------------------------------------------------------


def component_list(Gov: Graph) -> list[frozenset]:
    comps = [frozenset(bits(c)) for c in Gov.components()]
    return sorted(comps, key=min)


@dataclass
class PQSTree:
    kind: str  # "empty", "serial", "prime", "parallel"
    components: list[frozenset]
    modules: list[CAModule]
    metachords: dict[int, Metachord]
    qorder: dict[int, CircularWord]
    pnodes: list[tuple[int, ...]] = field(default_factory=list)

    def slot_of(self) -> dict[Letter, Letter]:
        out = {}
        for rep, mc in self.metachords.items():
            for x in mc.s0:
                out[x] = slot_letter(rep, 0)
            for x in mc.s1:
                out[x] = slot_letter(rep, 1)
        return out

    def slots(self) -> list[Letter]:
        return [slot_letter(m.representant, j) for m in self.modules for j in (0, 1)]

    def modules_of(self, q: int) -> list[CAModule]:
        return [m for m in self.modules if m.component == q]

    def pnodes_of(self, q: int) -> list[int]:
        return [p for p, qs in enumerate(self.pnodes) if q in qs]

    def nodes(self) -> list[tuple]:
        out = [("Q", q) for q in range(len(self.components))]
        out += [("P", p) for p in range(len(self.pnodes))]
        out += [("S", m.representant, j) for m in self.modules for j in (0, 1)]
        return out

    def adjacency(self) -> dict[tuple, list[tuple]]:
        adj: dict[tuple, list[tuple]] = {nd: [] for nd in self.nodes()}
        for m in self.modules:
            for j in (0, 1):
                s = ("S", m.representant, j)
                adj[s].append(("Q", m.component))
                adj[("Q", m.component)].append(s)
        for p, qs in enumerate(self.pnodes):
            for q in qs:
                adj[("P", p)].append(("Q", q))
                adj[("Q", q)].append(("P", p))
        return adj

    def side_vertices(self, start: tuple, avoid: tuple) -> set[int]:
        """Vertices of the Q-nodes reachable from `start` without entering `avoid`."""
        adj = self.adjacency()
        seen = {start, avoid}
        stack = [start]
        out: set[int] = set()
        while stack:
            nd = stack.pop()
            if nd[0] == "Q":
                out |= self.components[nd[1]]
            for nb in adj[nd]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return out


def slot_order_of(word: CircularWord, slot_of: dict[Letter, Letter]) -> CircularWord:
    seq: list[Letter] = []
    for x in word.letters:
        s = slot_of[x]
        if not seq or seq[-1] != s:
            seq.append(s)
    if len(seq) > 1 and seq[0] == seq[-1]:
        seq.pop()
    if len(seq) != len(set(seq)):
        raise StructureError("a slot is not contiguous in the model")
    return CircularWord(seq)


def _gap_cycles(word: CircularWord, comps: list[frozenset]):
    letters = word.letters
    N = len(letters)
    pos = {x: i for i, x in enumerate(letters)}
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    gaps: dict[Letter, tuple[int, Letter, Letter]] = {}  # keyed by start letter
    by_end: dict[Letter, Letter] = {}
    per_comp: dict[int, list[Letter]] = {}
    for x in letters:
        per_comp.setdefault(comp_of[x.symbol], []).append(x)
    for q, seq in per_comp.items():
        for i, a in enumerate(seq):
            b = seq[(i + 1) % len(seq)]
            if (pos[b] - pos[a]) % N != 1:
                gaps[a] = (q, a, b)
                by_end[b] = a
    cycles: list[list[tuple[int, Letter, Letter]]] = []
    seen: set[Letter] = set()
    for a in sorted(gaps, key=lambda x: pos[x]):
        if a in seen:
            continue
        cyc = []
        cur = a
        while cur not in seen:
            seen.add(cur)
            cyc.append(gaps[cur])
            nxt = letters[(pos[cur] + 1) % N]
            cur = by_end[nxt]
        if cur != a:
            raise StructureError("gap successor walk did not close into a cycle")
        cycles.append(cyc)
    return cycles, per_comp


def build_pqs_tree(G: Graph, Gov: Graph, phi: ChordModel, cas: list[CAModule]) -> PQSTree:
    comps = component_list(Gov)
    mcs = {m.representant: metachord_of(phi, m) for m in cas}
    if Gov.n == 0:
        return PQSTree("empty", [], [], {}, {})
    tree = PQSTree("", comps, list(cas), mcs, {})
    slot_of = tree.slot_of()
    if len(comps) == 1:
        root = modular_decomposition(Gov)
        tree.kind = "prime" if root.kind is Kind.PRIME else "serial"
        if root.is_leaf:
            tree.kind = "prime"
        tree.qorder[0] = slot_order_of(phi.word, slot_of)
        return tree
    tree.kind = "parallel"
    cycles, per_comp = _gap_cycles(phi.word, comps)
    p_of_gap: dict[Letter, int] = {}
    for p, cyc in enumerate(cycles):
        qs = tuple(q for q, _, _ in cyc)
        if len(set(qs)) != len(qs):
            raise StructureError("a component meets one P-node twice")
        tree.pnodes.append(qs)
        for _, a, _ in cyc:
            p_of_gap[a] = p
    for q, seq in per_comp.items():
        out: list[Letter] = []
        for a in seq:
            s = slot_of[a]
            if not out or out[-1] != s:
                out.append(s)
            if a in p_of_gap:
                out.append(p_letter(p_of_gap[a]))
        if len(out) > 1 and out[0] == out[-1]:
            out.pop()
        if len(out) != len(set(out)):
            raise StructureError(f"component {q} does not read as a circular order of its neighbours")
        tree.qorder[q] = CircularWord(out)
    edges = sum(len(qs) for qs in tree.pnodes)
    if edges != len(comps) + len(tree.pnodes) - 1:
        raise StructureError("P/Q structure is not a tree")
    return tree


def separated(G: Graph, Q1: Iterable[int], Q2: Iterable[int]) -> bool:
    Q1, Q2 = set(Q1), set(Q2)
    for v in range(G.n):
        if v in Q1 or v in Q2:
            continue
        left, right = left_right_sets(G, v)
        if (Q1 <= left and Q2 <= right) or (Q2 <= left and Q1 <= right):
            return True
    return False


def pnodes_by_separation(G: Graph, comps: list[frozenset]) -> set[frozenset]:
    """P-nodes as maximal sets of pairwise neighbouring components (brute force)."""
    k = len(comps)
    near = {(i, j) for i in range(k) for j in range(k) if i != j and not separated(G, comps[i], comps[j])}
    cliques = []
    for r in range(2, k + 1):
        for c in itertools.combinations(range(k), r):
            if all((a, b) in near for a, b in itertools.combinations(c, 2)):
                cliques.append(frozenset(c))
    return {c for c in cliques if not any(c < d for d in cliques)}


def extended_model(phi: ChordModel, pqs: PQSTree, q: int) -> CircularWord:
    """The model restricted to Q, with each neighbouring P-side block as one P letter."""
    if pqs.kind != "parallel":
        # a single Q-node has no P-neighbours to replace
        return phi.word
    Q = pqs.components[q]
    owner: dict[int, int] = {}
    for p in pqs.pnodes_of(q):
        for v in pqs.side_vertices(("P", p), ("Q", q)):
            owner[v] = p
    out: list[Letter] = []
    for x in phi.word.letters:
        if x.symbol in Q:
            out.append(x)
        elif x.symbol not in owner:
            raise StructureError("letter outside every P-side")
        elif not out or out[-1] != p_letter(owner[x.symbol]):
            out.append(p_letter(owner[x.symbol]))
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    if len(out) != len(set(out)):
        raise StructureError("a P-side block is not contiguous")
    return CircularWord(out)


def k_relation_prime(G: Graph, Gov: Graph, Q: Iterable[int], t: MDNode) -> list[frozenset]:
    """Equivalence classes of the K-relation on the children of a prime module Q."""
    Q = set(Q)
    if t.vertices != frozenset(Q) or t.kind is not Kind.PRIME:
        raise ValueError("k_relation_prime needs the prime MD node of Q")
    sides = {v: left_right_sets(G, v) for v in range(G.n)}
    out: list[frozenset] = []
    for Mi in t.children:
        M = set(Mi.vertices)
        rest = Q - M
        if Mi.kind is Kind.PRIME or Mi.is_leaf:
            out.append(frozenset(M))
            continue
        if Mi.kind is Kind.PARALLEL:
            probes = [u for u in rest if not any(Gov.has_edge(u, x) for x in M)]

            def key(v, probes=probes):
                return tuple(v in sides[u][0] for u in probes)
        else:

            def key(v, rest=rest):
                left, right = sides[v]
                return frozenset({frozenset(left & rest), frozenset(right & rest)})

        classes: dict = {}
        for v in sorted(M):
            classes.setdefault(key(v), set()).add(v)
        out += [frozenset(c) for c in classes.values()]
    return sorted(out, key=min)


def inside_set(phiQ: CircularWord, K: Iterable[int]) -> set[Letter]:
    """P letters enclosed by the two blocks of K in an extended model."""
    K = set(K)
    Qsyms = {x.symbol for x in phiQ.letters if not is_p(x)}
    pm = consistent_permutation_model(restrict(phiQ, Qsyms), K)
    if pm is None:
        raise StructureError("K does not form two blocks")
    letters = phiQ.letters
    N = len(letters)
    pos = {x: i for i, x in enumerate(letters)}
    found: set[Letter] = set()
    for block in (pm.tau0, pm.tau1):
        start = pos[block[0]]
        remaining = set(block)
        i = start
        while remaining:
            x = letters[i % N]
            if x in remaining:
                remaining.discard(x)
            elif is_p(x):
                found.add(x)
            else:
                raise StructureError("block interrupted by a foreign letter")
            i += 1
    return found


# --- PQSM-tree -------------------------------------------------------------------


@dataclass
class PQSMTree:
    graph: Graph
    gov: Graph
    phi: ChordModel
    pqs: PQSTree
    md: dict[int, MDNode]
    read_models: dict[int, OrientedPermutationModel]

    @property
    def metachords(self) -> dict[int, Metachord]:
        return self.pqs.metachords

    def prime_hint(self, rep: int) -> frozenset:
        """The orientation of the edges of (S, ~) read from the base model."""
        return pm_to_orientations(self.read_models[rep], self.gov)[1]


def assemble_pqsm(pqs: PQSTree, cas: list[CAModule], Gov: Graph, phi: ChordModel, G: Optional[Graph] = None) -> PQSMTree:
    md = {m.representant: modular_decomposition(Gov, m.vertices) for m in cas}
    reads = {m.representant: consistent_permutation_model(phi.word, m.vertices) for m in cas}
    return PQSMTree(G if G is not None else Gov, Gov, phi, pqs, md, reads)


def child_relations(tree: PQSMTree, rep: int, node: MDNode) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Child-index pairs (i, j) with K_i < K_j, and with K_i before K_j under the read model."""
    mc = tree.metachords[rep]
    reps = [min(c.vertices) for c in node.children]
    k = len(reps)
    lt = [(i, j) for i in range(k) for j in range(k) if (reps[i], reps[j]) in mc.lt]
    prec = tree.prime_hint(rep)
    pr = [(i, j) for i in range(k) for j in range(k) if (reps[i], reps[j]) in prec]
    return lt, pr


def m_node_orderings(tree: PQSMTree, rep: int, node: MDNode, limit: Optional[int] = None) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Members of Pi(M) as pairs of child-index sequences (slot 0 side, slot 1 side)."""
    k = len(node.children)
    lt, read_prec = child_relations(tree, rep, node)
    lts = set(lt)
    if node.kind is Kind.PARALLEL:
        precs = [set()]
    elif node.kind is Kind.SERIAL:
        precs = []
        for perm in itertools.permutations(range(k)):
            precs.append({(perm[a], perm[b]) for a in range(k) for b in range(a + 1, k)})
            if limit is not None and len(precs) >= limit:
                break
    else:
        base = set(read_prec)
        precs = [base, {(j, i) for i, j in base}]
    out = []
    for prec in precs:
        first = _order(k, prec | lts)
        second = _order(k, prec | {(j, i) for i, j in lts})
        out.append((tuple(first), tuple(second)))
    return out


def _order(k: int, before: set) -> list[int]:
    rank = [0] * k
    for _, j in before:
        rank[j] += 1
    order = sorted(range(k), key=lambda i: rank[i])
    if sorted(rank) != list(range(k)):
        raise StructureError("child relations do not form a total order")
    return order


def build_pqsm(G: Graph, phi: ChordModel) -> PQSMTree:
    """Full construction from a graph without twins/universals and a conformal model."""
    Gov = phi.graph
    t = modular_decomposition(Gov)
    cas = compute_ca_modules(Gov, t, phi)
    pqs = build_pqs_tree(G, Gov, phi, cas)
    return assemble_pqsm(pqs, cas, Gov, phi, G)
