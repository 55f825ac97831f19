"""Cross-check the structural algorithms against the brute-force oracles."""

from __future__ import annotations

import itertools
import sys
from typing import TextIO

from . import oracle
from .canon import canonize
from .enumeration import enumerate_conformal
from .models import arcs_to_chords, check_normalized, normalize
from .moddecomp import modular_decomposition
from .pqsm import build_pqsm, ca_modules_definitional, compute_ca_modules


def run_selftest(n: int, out: TextIO = sys.stdout) -> bool:
    if n > 6:
        print("selftest is limited to n <= 6", file=out)
        return False
    corpus = oracle.build_corpus(n)
    failures = 0
    for m in corpus:
        G = m.graph
        nm = normalize(G, m)
        ok = not check_normalized(G, nm)
        tree = build_pqsm(G, arcs_to_chords(nm))
        ok = ok and set(enumerate_conformal(tree)) == oracle.brute_conformal_models(G)
        t = modular_decomposition(tree.gov)
        ok = ok and compute_ca_modules(tree.gov, t, tree.phi) == ca_modules_definitional(tree.gov, tree.phi)
        if not ok:
            failures += 1
            print(f"FAIL model {','.join(m.word.tokens())}", file=out)
    canon = [canonize(m) for m in corpus]
    for (a, ca), (b, cb) in itertools.combinations(zip(corpus, canon), 2):
        if (ca == cb) != oracle.brute_iso(a.graph, b.graph):
            failures += 1
            print(f"FAIL canon {','.join(a.word.tokens())} vs {','.join(b.word.tokens())}", file=out)
    print(f"{len(corpus)} graphs checked, {failures} failures", file=out)
    return failures == 0
