"""Circular-arc models, normalization, oriented chord models and conformality."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .graphs import (
    LEFT_RELATIONS,
    RIGHT_RELATIONS,
    Graph,
    PairRelation,
    classify_pair,
    is_reduced,
    overlap_graph,
)
from .words import CircularWord, Letter, as_word

R = PairRelation

# the order of u0/u1/v1 after v0 determines the geometric relation "v rel u"
_PATTERN = {
    ("v1", "u0", "u1"): R.DISJOINT,
    ("u0", "u1", "v1"): R.CONTAINS,
    ("u0", "v1", "u1"): R.OVERLAP,
    ("u1", "v1", "u0"): R.OVERLAP,
    ("u1", "u0", "v1"): R.COVER_CIRCLE,
    ("v1", "u1", "u0"): R.CONTAINED_IN,
}


class NormalizationError(RuntimeError):
    pass


class NotConformal(ValueError):
    pass


def _positions(word: CircularWord) -> dict[Letter, int]:
    return {x: i for i, x in enumerate(word.letters)}


def _pattern(pos: dict[Letter, int], n: int, v, u) -> tuple[str, ...]:
    start = pos[Letter(v, 0)]
    marks = [
        ((pos[Letter(u, 0)] - start) % n, "u0"),
        ((pos[Letter(u, 1)] - start) % n, "u1"),
        ((pos[Letter(v, 1)] - start) % n, "v1"),
    ]
    return tuple(name for _, name in sorted(marks))


def arc_relation(word: CircularWord, v, u, pos=None) -> PairRelation:
    """Geometric relation `v rel u` of the arcs v0->v1 and u0->u1 (clockwise)."""
    pos = pos if pos is not None else _positions(word)
    return _PATTERN[_pattern(pos, len(word), v, u)]


def _check_vertex_letters(word: CircularWord) -> list:
    syms = sorted(word.symbols())
    for s in syms:
        if Letter(s, 0) not in word.letters or Letter(s, 1) not in word.letters:
            raise ValueError(f"vertex {s} needs both letters")
    if len(word) != 2 * len(syms):
        raise ValueError("word contains letters that are not vertex endpoints")
    return syms


def intersection_graph(word) -> Graph:
    word = as_word(word)
    syms = _check_vertex_letters(word)
    if syms != list(range(len(syms))):
        raise ValueError("arc model vertices must be 0..n-1")
    pos = _positions(word)
    n = len(syms)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if arc_relation(word, v, u, pos) is not R.DISJOINT
    ]
    return Graph(n, edges)


def chord_graph(word, vertices: Optional[Iterable] = None) -> Graph:
    """Graph of interleaving chords; vertices must be 0..n-1."""
    word = as_word(word)
    syms = _check_vertex_letters(word)
    n = len(syms) if vertices is None else len(list(vertices))
    pos = _positions(word)
    edges = [
        (u, v)
        for i, u in enumerate(syms)
        for v in syms[i + 1 :]
        if arc_relation(word, v, u, pos) is R.OVERLAP
    ]
    return Graph(max(n, max(syms, default=-1) + 1), edges)


@dataclass(frozen=True)
class ArcModel:
    word: CircularWord
    graph: Graph

    @classmethod
    def from_word(cls, word) -> "ArcModel":
        word = as_word(word)
        return cls(word, intersection_graph(word))

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class ChordModel:
    word: CircularWord
    graph: Graph


@dataclass(frozen=True)
class Violation:
    v: int
    u: int
    expected: Optional[PairRelation]
    actual: Optional[PairRelation]
    kind: str = "relation"


def check_normalized(G: Graph, m: ArcModel) -> list[Violation]:
    word = m.word
    out: list[Violation] = []
    if intersection_graph(word) != G:
        out.append(Violation(-1, -1, None, None, kind="intersection_mismatch"))
        return out
    pos = _positions(word)
    for v in range(G.n):
        for u in range(G.n):
            if u == v:
                continue
            want = classify_pair(G, v, u)
            got = arc_relation(word, v, u, pos)
            if want is not got:
                out.append(Violation(v, u, want, got))
    return out


# --- normalization -------------------------------------------------------------


@dataclass
class NormalizationResult:
    model: ArcModel
    before: dict[Letter, Fraction]
    after: dict[Letter, Fraction]
    steps: int


def _coords_to_word(coords: dict[Letter, Fraction]) -> CircularWord:
    return CircularWord(sorted(coords, key=lambda x: coords[x]))


def _move_past(coords: dict[Letter, Fraction], mover: Letter, target: Letter, clockwise: bool, length: int) -> None:
    """Place `mover` just beyond `target` in the given direction."""
    t = coords[target]
    others = sorted(c for x, c in coords.items() if x != mover)
    if clockwise:
        nxt = [c for c in others if c > t]
        bound = nxt[0] if nxt else others[0] + length
        new = (t + bound) / 2
    else:
        prv = [c for c in others if c < t]
        bound = prv[-1] if prv else others[-1] - length
        new = (t + bound) / 2
    coords[mover] = new % length


def _repair_step(G: Graph, coords: dict[Letter, Fraction], length: int) -> bool:
    word = _coords_to_word(coords)
    pos = _positions(word)
    n = G.n
    # containment first: those sweeps stay inside the contained arc
    for v in range(n):
        for u in range(n):
            if u == v or classify_pair(G, v, u) is not R.CONTAINS:
                continue
            pat = _pattern(pos, len(word), v, u)
            got = _PATTERN[pat]
            if got is R.CONTAINS:
                continue
            if got is not R.OVERLAP:
                raise NormalizationError(f"pair ({v},{u}) is {got.value}, cannot become containment")
            if pat == ("u0", "v1", "u1"):
                _move_past(coords, Letter(v, 1), Letter(u, 1), True, length)
            else:
                _move_past(coords, Letter(v, 0), Letter(u, 0), False, length)
            return True
    for v in range(n):
        for u in range(v + 1, n):
            if classify_pair(G, v, u) is not R.COVER_CIRCLE:
                continue
            pat = _pattern(pos, len(word), v, u)
            got = _PATTERN[pat]
            if got is R.COVER_CIRCLE:
                continue
            if got is not R.OVERLAP:
                raise NormalizationError(f"pair ({v},{u}) is {got.value}, cannot become a cover")
            # name the pair so that the word reads a0 b0 a1 b1, then push b1 past a0
            a, b = (v, u) if pat == ("u0", "v1", "u1") else (u, v)
            _move_past(coords, Letter(b, 1), Letter(a, 0), True, length)
            return True
    return False


def normalize_with_trace(G: Graph, m: ArcModel) -> NormalizationResult:
    if not is_reduced(G):
        raise ValueError("normalize needs a graph without twins and universal vertices")
    if m.graph != G:
        raise ValueError("model does not realize the graph")
    length = len(m.word)
    before = {x: Fraction(i) for i, x in enumerate(m.word.letters)}
    coords = dict(before)
    cap = 4 * G.n * G.n
    steps = 0
    while _repair_step(G, coords, length):
        steps += 1
        if steps > cap:
            raise NormalizationError(f"no fixpoint within {cap} extension steps")
        if intersection_graph(_coords_to_word(coords)) != G:
            raise NormalizationError("an extension changed the intersection graph")
    out = ArcModel(_coords_to_word(coords), G)
    return NormalizationResult(out, before, coords, steps)


def normalize(G: Graph, m: ArcModel) -> ArcModel:
    return normalize_with_trace(G, m).model


# --- chords ----------------------------------------------------------------------


def _between(pos: dict[Letter, int], n: int, a: Letter, b: Letter, x: Letter) -> bool:
    """x lies strictly inside the clockwise walk from a to b."""
    return 0 < (pos[x] - pos[a]) % n < (pos[b] - pos[a]) % n


def check_conformal(G: Graph, w, U: Optional[Iterable[int]] = None) -> bool:
    w = as_word(w)
    U = sorted(w.symbols()) if U is None else sorted(set(U))
    if set(w.letters) != {Letter(v, j) for v in U for j in (0, 1)}:
        return False
    pos = _positions(w)
    n = len(w)
    for v in U:
        v0, v1 = Letter(v, 0), Letter(v, 1)
        for u in U:
            if u == v:
                continue
            rel = classify_pair(G, v, u)
            u0, u1 = Letter(u, 0), Letter(u, 1)
            in0 = _between(pos, n, v0, v1, u0)
            in1 = _between(pos, n, v0, v1, u1)
            if rel in LEFT_RELATIONS:
                ok = in0 and in1
            elif rel in RIGHT_RELATIONS:
                ok = not in0 and not in1
            else:
                ok = in0 != in1
            if not ok:
                return False
    return True


def arcs_to_chords(m: ArcModel) -> ChordModel:
    return ChordModel(m.word, overlap_graph(m.graph))


def chords_to_arcs(c: ChordModel, G: Graph) -> ArcModel:
    if not check_conformal(G, c.word, range(G.n)):
        raise NotConformal("chord model is not conformal to the graph")
    return ArcModel(c.word, G)
