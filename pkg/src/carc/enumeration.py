"""Admissible models, slot orders and the conformal models of an overlap graph."""

from __future__ import annotations

import itertools
import math
import os
from typing import Iterator, Optional

from .moddecomp import MDNode, enumerate_transitive_orientations, orientations_to_pm, pm_to_orientations
from .pqsm import Metachord, PQSMTree, PQSTree, is_p, p_letter, slot_order_of
from .words import CircularWord, Letter, OrientedPermutationModel, as_word, consistent_permutation_model, reflect

DEFAULT_CAP = 10**6


class EnumerationCapExceeded(RuntimeError):
    pass


def enumeration_cap() -> int:
    raw = os.environ.get("CARC_ENUM_CAP")
    return int(raw) if raw else DEFAULT_CAP


def admissible_models(
    mc: Metachord, t: Optional[MDNode], gov=None, prime_hint: Optional[frozenset] = None
) -> list[OrientedPermutationModel]:
    """One permutation model per transitive orientation of (S, ~), all agreeing with mc.lt.

    `gov` is the overlap graph; prime quotients are seeded by `prime_hint`
    when given.
    """
    if len(mc.vertices) == 1:
        (x,) = mc.s0
        (y,) = mc.s1
        return [OrientedPermutationModel((x,), (y,))]
    if gov is None:
        raise ValueError("gov is required for modules with more than one vertex")
    first_sup = {x.symbol: x.sup for x in mc.s0}
    out = []
    for prec in enumerate_transitive_orientations(gov, t, prime_hint):
        out.append(orientations_to_pm(mc.lt, prec, mc.vertices, first_sup))
    return out


def tree_admissible_models(tree: PQSMTree) -> dict[int, list[OrientedPermutationModel]]:
    return {
        rep: admissible_models(mc, tree.md[rep], tree.gov, tree.prime_hint(rep))
        for rep, mc in sorted(tree.metachords.items())
    }


# --- slot orders ----------------------------------------------------------------


def _serial_orders(slots: list[tuple[Letter, Letter]], cap: int) -> list[CircularWord]:
    t = len(slots)
    if t == 0:
        return []
    total = math.factorial(t - 1) * 2 ** (t - 1)
    if total > cap:
        raise EnumerationCapExceeded(f"serial root has {total} slot orders, cap is {cap}")
    first, rest = slots[0], slots[1:]
    out = []
    # fix the first module's S^0 at the front to skip rotations
    for perm in itertools.permutations(rest):
        for flips in itertools.product((0, 1), repeat=len(rest)):
            head = [first[0]] + [pair[f] for pair, f in zip(perm, flips)]
            tail = [first[1]] + [pair[1 - f] for pair, f in zip(perm, flips)]
            out.append(CircularWord(head + tail))
    return out


def _circular_orders(items: tuple) -> Iterator[tuple]:
    if len(items) <= 2:
        yield items
        return
    for perm in itertools.permutations(items[1:]):
        yield (items[0],) + perm


def _expand_q(q: int, start_after: Optional[Letter], qwords: dict, porders: dict, out: list) -> None:
    seq = list(qwords[q])
    if start_after is not None:
        i = seq.index(start_after)
        seq = seq[i + 1 :] + seq[:i]
    for x in seq:
        if not is_p(x):
            out.append(x)
            continue
        pid = x.symbol[1]
        cyc = porders[pid]
        i = cyc.index(q)
        for nxt in cyc[i + 1 :] + cyc[:i]:
            _expand_q(nxt, p_letter(pid), qwords, porders, out)


def _parallel_orders(pqs: PQSTree, cap: int) -> list[CircularWord]:
    qs = sorted(pqs.qorder)
    q_choices = []
    for q in qs:
        w = pqs.qorder[q]
        r = reflect(w)
        q_choices.append([w.letters] if r == w else [w.letters, r.letters])
    p_choices = [list(_circular_orders(tuple(cyc))) for cyc in pqs.pnodes]
    total = math.prod(len(c) for c in q_choices) * math.prod(len(c) for c in p_choices)
    if total > cap:
        raise EnumerationCapExceeded(f"{total} ordered PQ-trees exceed cap {cap}")
    seen: set[CircularWord] = set()
    out = []
    for qsel in itertools.product(*q_choices):
        qwords = dict(zip(qs, qsel))
        for psel in itertools.product(*p_choices):
            porders = dict(enumerate(psel))
            letters: list[Letter] = []
            _expand_q(qs[0], None, qwords, porders, letters)
            w = CircularWord(letters)
            if w not in seen:
                seen.add(w)
                out.append(w)
    return out


def slot_orders(pqs: PQSTree, cap: Optional[int] = None) -> list[CircularWord]:
    """The set Pi of circular slot orders, without rotation duplicates."""
    cap = enumeration_cap() if cap is None else cap
    if pqs.kind == "empty":
        return []
    if pqs.kind == "serial":
        pairs = [tuple(s for s in pqs.slots() if s.symbol == ("S", m.representant)) for m in pqs.modules]
        return _serial_orders([(a, b) for a, b in pairs], cap)
    if pqs.kind == "prime":
        w = pqs.qorder[0]
        r = reflect(w)
        return [w] if r == w else [w, r]
    return _parallel_orders(pqs, cap)


# --- conformal models -----------------------------------------------------------


def _substitute(order: CircularWord, blocks: dict[Letter, tuple[Letter, ...]]) -> CircularWord:
    out: list[Letter] = []
    for s in order.letters:
        out.extend(blocks[s])
    return CircularWord(out)


def iter_conformal(tree: PQSMTree, cap: Optional[int] = None) -> Iterator[CircularWord]:
    """Stream conformal models: slot orders outermost, then per-module model choices."""
    cap = enumeration_cap() if cap is None else cap
    pqs = tree.pqs
    if pqs.kind == "empty":
        return
    models = tree_admissible_models(tree)
    reps = sorted(models)
    seen: set[CircularWord] = set()
    for order in slot_orders(pqs, cap):
        for combo in itertools.product(*(models[r] for r in reps)):
            blocks = {}
            for r, pm in zip(reps, combo):
                blocks[Letter(("S", r), 0)] = pm.tau0
                blocks[Letter(("S", r), 1)] = pm.tau1
            w = _substitute(order, blocks)
            if w not in seen:
                seen.add(w)
                yield w


def enumerate_conformal(tree: PQSMTree, cap: Optional[int] = None) -> list[CircularWord]:
    return list(iter_conformal(tree, cap))


def is_admissible(w, tree: PQSMTree) -> bool:
    """Check that w splits into a slot order from Pi and admissible blocks."""
    w = as_word(w)
    verts = set(range(tree.gov.n))
    if set(w.letters) != {Letter(v, j) for v in verts for j in (0, 1)}:
        return False
    if not verts:
        return True
    for rep, mc in tree.metachords.items():
        pm = consistent_permutation_model(w, mc.vertices)
        if pm is None:
            return False
        blocks = {frozenset(pm.tau0): pm.tau0, frozenset(pm.tau1): pm.tau1}
        if set(blocks) != {mc.s0, mc.s1}:
            return False
        model = OrientedPermutationModel(blocks[mc.s0], blocks[mc.s1])
        try:
            lt, _ = pm_to_orientations(model, tree.gov)
        except ValueError:
            return False
        if lt != mc.lt:
            return False
    try:
        order = slot_order_of(w, tree.pqs.slot_of())
    except Exception:
        return False
    return order in set(slot_orders(tree.pqs))
