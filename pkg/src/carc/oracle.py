"""Brute-force references used to check the structural algorithms at small sizes.

Nothing here imports the code it is meant to check: graphs are plain
adjacency sets and words are tuples of (vertex, bit) pairs.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .graphs import Graph
from .models import ArcModel
from .words import CircularWord, Letter

Word = tuple  # of (vertex, bit) pairs, read clockwise


class OracleSizeExceeded(ValueError):
    pass


def _adjacency(G: Graph) -> list[set[int]]:
    return [{u for u in range(G.n) if G.has_edge(v, u)} for v in range(G.n)]


# --- arc models ------------------------------------------------------------------


def arc_graph_edges(word: Word) -> list[tuple[int, int]]:
    """Edges of the intersection graph of arcs v^0 -> v^1 read clockwise."""
    N = len(word)
    pos = {x: i for i, x in enumerate(word)}
    verts = sorted({v for v, _ in word})
    cover = {}
    for v in verts:
        a, b = pos[(v, 0)], pos[(v, 1)]
        cover[v] = {(a + i) % N for i in range((b - a) % N + 1)}
    return [(u, v) for u, v in itertools.combinations(verts, 2) if cover[u] & cover[v]]


def _to_model(word: Word) -> ArcModel:
    n = len(word) // 2
    return ArcModel(CircularWord(Letter(v, j) for v, j in word), Graph(n, arc_graph_edges(word)))


def gen_arc_models(n: int) -> Iterator[ArcModel]:
    """All arc models on n vertices, one per rotation class (v0^0 first)."""
    letters = [(v, j) for v in range(n) for j in (0, 1)]
    if n == 0:
        return
    rest = letters[1:]
    for perm in itertools.permutations(rest):
        yield _to_model((letters[0],) + perm)


def _matchings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    a = points[0]
    for i in range(1, len(points)):
        b = points[i]
        rest = points[1:i] + points[i + 1 :]
        for m in _matchings(rest):
            yield [(a, b)] + m


def gen_arc_words_up_to_relabel(n: int) -> Iterator[Word]:
    """Arc words whose chords are numbered by first endpoint: every graph class appears."""
    for m in _matchings(list(range(2 * n))):
        for flips in itertools.product((0, 1), repeat=n):
            word = [None] * (2 * n)
            for v, (a, b) in enumerate(m):
                word[a] = (v, flips[v])
                word[b] = (v, 1 - flips[v])
            yield tuple(word)


def random_arc_word(n: int, rng: random.Random) -> Word:
    letters = [(v, j) for v in range(n) for j in (0, 1)]
    rng.shuffle(letters)
    return tuple(letters)


def random_arc_model(n: int, rng: random.Random) -> ArcModel:
    return _to_model(random_arc_word(n, rng))


def relabel_model(m: ArcModel, perm: list[int]) -> ArcModel:
    word = tuple((perm[x.symbol], x.sup) for x in m.word.letters)
    return _to_model(word)


# --- graphs ------------------------------------------------------------------------


def has_twins_or_universal(adj: list[set[int]]) -> bool:
    n = len(adj)
    closed = [frozenset(adj[v] | {v}) for v in range(n)]
    if any(len(c) == n for c in closed):
        return True
    return len(set(closed)) != n


def _iso_key(adj: list[set[int]]) -> tuple:
    degs = sorted(len(a) for a in adj)
    return (len(adj), sum(degs), tuple(degs))


def brute_iso(G: Graph, H: Graph, limit: int = 9) -> bool:
    """Backtracking isomorphism test with degree pruning."""
    if max(G.n, H.n) > limit:
        raise OracleSizeExceeded(f"brute_iso is limited to {limit} vertices")
    A, B = _adjacency(G), _adjacency(H)
    if _iso_key(A) != _iso_key(B):
        return False
    n = G.n
    order = sorted(range(n), key=lambda v: -len(A[v]))
    image: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if w in used or len(B[w]) != len(A[v]):
                continue
            if all((u in A[v]) == (image[u] in B[w]) for u in image):
                image[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del image[v]
                used.discard(w)
        return False

    return extend(0)


def brute_modules(G: Graph, limit: int = 7) -> set[frozenset]:
    if G.n > limit:
        raise OracleSizeExceeded(f"brute_modules is limited to {limit} vertices")
    adj = _adjacency(G)
    out = set()
    for r in range(1, G.n + 1):
        for X in itertools.combinations(range(G.n), r):
            Xs = set(X)
            if all(Xs <= adj[v] or not (Xs & adj[v]) for v in range(G.n) if v not in Xs):
                out.add(frozenset(X))
    return out


def brute_strong_modules(G: Graph) -> set[frozenset]:
    mods = brute_modules(G)
    return {M for M in mods if all(M <= X or X <= M or not (M & X) for X in mods)}


def brute_orientation_count(G: Graph) -> int:
    """Number of transitive orientations, by trying every orientation of every edge."""
    edges = [(u, v) for u in range(G.n) for v in range(u + 1, G.n) if G.has_edge(u, v)]
    count = 0
    for flips in itertools.product((False, True), repeat=len(edges)):
        arcs = {(b, a) if f else (a, b) for (a, b), f in zip(edges, flips)}
        succ: dict[int, set[int]] = {}
        for a, b in arcs:
            succ.setdefault(a, set()).add(b)
        if all((a, c) in arcs for a, b in arcs for c in succ.get(b, ())):
            count += 1
    return count


# --- conformal models ---------------------------------------------------------------


def _sides(adj: list[set[int]]) -> dict[tuple[int, int], str]:
    """For each ordered pair (v, u): 'L', 'R' or 'X' (chords must cross)."""
    n = len(adj)
    closed = [adj[v] | {v} for v in range(n)]
    everything = set(range(n))
    out = {}
    for v in range(n):
        for u in range(n):
            if u == v:
                continue
            Nv, Nu = closed[v], closed[u]
            if u not in adj[v]:
                out[(v, u)] = "R"
            elif Nu < Nv:
                out[(v, u)] = "L"
            elif Nv < Nu:
                out[(v, u)] = "R"
            elif (
                Nv | Nu == everything
                and all(closed[w] < Nv for w in Nv - Nu)
                and all(closed[w] < Nu for w in Nu - Nv)
            ):
                out[(v, u)] = "L"
            else:
                out[(v, u)] = "X"
    return out


def _inside(p: dict, v: int, x: int) -> bool:
    """Whether position x lies strictly inside the arc v^0 -> v^1.

    A missing endpoint of v will be placed after every current letter,
    which already fixes the answer.
    """
    a, b = p.get((v, 0)), p.get((v, 1))
    if a is not None and b is not None:
        return (a < x < b) if a < b else (x > a or x < b)
    if a is not None:
        return x > a
    return x < b


def _letters_ok(side: str, p: dict, v: int, u: int) -> bool:
    """Check the placed letters of u against the (partly) placed chord v."""
    got = [_inside(p, v, p[(u, j)]) for j in (0, 1) if (u, j) in p]
    if side == "L":
        return all(got)
    if side == "R":
        return not any(got)
    return len(got) < 2 or got[0] != got[1]


def brute_conformal_models(G: Graph, limit: int = 9) -> set[CircularWord]:
    """Every conformal oriented chord model, one per rotation class, by backtracking.

    Letters are placed left to right after a fixed v0^0; every placed letter
    is checked against every started chord, so dead branches stop early.
    """
    if G.n > limit:
        raise OracleSizeExceeded(f"brute_conformal_models is limited to {limit} vertices")
    n = G.n
    if n == 0:
        return set()
    sides = _sides(_adjacency(G))
    letters = [(v, j) for v in range(n) for j in (0, 1)]
    placed: dict[tuple[int, int], int] = {(0, 0): 0}
    seq = [(0, 0)]
    out: set[CircularWord] = set()

    def started(v: int) -> bool:
        return (v, 0) in placed or (v, 1) in placed

    def consistent(u: int) -> bool:
        for v in range(n):
            if v != u and started(v):
                if not (_letters_ok(sides[(v, u)], placed, v, u) and _letters_ok(sides[(u, v)], placed, u, v)):
                    return False
        return True

    def extend() -> None:
        if len(seq) == 2 * n:
            out.add(CircularWord(Letter(v, j) for v, j in seq))
            return
        for x in letters:
            if x in placed:
                continue
            placed[x] = len(seq)
            seq.append(x)
            if consistent(x[0]):
                extend()
            seq.pop()
            del placed[x]

    extend()
    return out


# --- corpus -------------------------------------------------------------------------


def build_corpus(max_n: int, min_n: int = 2) -> list[ArcModel]:
    """Twin-free, universal-free arc graphs up to isomorphism, with one model each."""
    out: list[ArcModel] = []
    buckets: dict[tuple, list[ArcModel]] = {}
    for n in range(min_n, max_n + 1):
        for word in gen_arc_words_up_to_relabel(n):
            edges = arc_graph_edges(word)
            adj: list[set[int]] = [set() for _ in range(n)]
            for u, v in edges:
                adj[u].add(v)
                adj[v].add(u)
            if has_twins_or_universal(adj):
                continue
            key = _iso_key(adj)
            G = Graph(n, edges)
            bucket = buckets.setdefault(key, [])
            if any(brute_iso(G, m.graph) for m in bucket):
                continue
            m = _to_model(word)
            bucket.append(m)
            out.append(m)
    return out


def _token(v: int, j: int) -> str:
    return f"v{v}^{j}"


def save_corpus(models: list[ArcModel], path: Path, max_n: int) -> None:
    lines = [f"# n<={max_n} count={len(models)}"]
    lines += [",".join(_token(x.symbol, x.sup) for x in m.word.letters) for m in models]
    Path(path).write_text("\n".join(lines) + "\n")


def load_corpus(path: Path) -> list[ArcModel]:
    out = []
    for line in Path(path).read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        word = []
        for tok in line.split(","):
            body, _, bit = tok.strip()[1:].partition("^")
            word.append((int(body), int(bit)))
        out.append(_to_model(tuple(word)))
    return out


def corpus(max_n: int, cache: Optional[Path] = None) -> list[ArcModel]:
    """Build the corpus, reusing a cache file when one with the same bound exists."""
    if cache is not None and Path(cache).exists():
        header = Path(cache).read_text().splitlines()[0]
        if header.startswith(f"# n<={max_n} "):
            return load_corpus(cache)
    models = build_corpus(max_n)
    if cache is not None:
        save_corpus(models, cache, max_n)
    return models


def all_graphs(n: int) -> Iterator[Graph]:
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def random_permutation(n: int, rng: random.Random) -> list[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm


def models_of(words: Iterable[Word]) -> list[ArcModel]:
    return [_to_model(w) for w in words]
