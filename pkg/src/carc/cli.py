"""Command-line entry point: carc <command> [options]."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .canon import canonize
from .enumeration import EnumerationCapExceeded, iter_conformal, slot_orders
from .graphs import Graph, is_reduced
from .models import ArcModel, NormalizationError, arcs_to_chords, check_normalized, intersection_graph, normalize
from .moddecomp import MDNode
from .pqsm import PQSMTree, build_pqsm, m_node_orderings
from .words import CircularWord, format_letter, parse_word

EXIT_PARSE = 2
EXIT_NORMALIZE = 3
EXIT_CAP = 4


class InputError(ValueError):
    pass


def load_document(text: str) -> ArcModel:
    """Parse {"n": int, "word": [...], "adjacency": optional edge list}."""
    try:
        doc = json.loads(text)
        n = int(doc["n"])
        word = parse_word(doc["word"])
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot parse model document: {exc}") from exc
    if len(word) != 2 * n:
        raise InputError(f"word has {len(word)} letters, expected {2 * n}")
    try:
        G = intersection_graph(word)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if "adjacency" in doc and doc["adjacency"] is not None:
        given = Graph(n, [tuple(e) for e in doc["adjacency"]])
        if given != G:
            raise InputError("adjacency does not match the arc intersections")
    return ArcModel(word, G)


def dump_document(m: ArcModel) -> str:
    return json.dumps({"n": m.graph.n, "word": m.word.tokens()})


def _read(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _normalized(m: ArcModel) -> ArcModel:
    if not is_reduced(m.graph):
        raise NormalizationError("graph has twins or universal vertices")
    out = normalize(m.graph, m)
    if check_normalized(m.graph, out):
        raise NormalizationError("normalized model fails the relation check")
    return out


def _tree(m: ArcModel) -> PQSMTree:
    return build_pqsm(m.graph, arcs_to_chords(_normalized(m)))


def _word_line(w: CircularWord) -> str:
    return ",".join(w.tokens())


# --- tree export ------------------------------------------------------------------


def _md_json(tree: PQSMTree, rep: int, node: MDNode) -> dict:
    out = {"kind": node.kind.value, "vertices": sorted(node.vertices)}
    if node.children:
        out["children"] = [_md_json(tree, rep, c) for c in node.children]
        if node.kind.value == "prime":
            out["orderings"] = [[list(a), list(b)] for a, b in m_node_orderings(tree, rep, node)]
    return out


def tree_json(tree: PQSMTree) -> dict:
    pqs = tree.pqs
    return {
        "kind": pqs.kind,
        "components": [sorted(c) for c in pqs.components],
        "modules": [
            {
                "representant": m.representant,
                "vertices": sorted(m.vertices),
                "component": m.component,
                "slot0": sorted(format_letter(x) for x in tree.metachords[m.representant].s0),
                "slot1": sorted(format_letter(x) for x in tree.metachords[m.representant].s1),
                "lt": sorted(list(p) for p in tree.metachords[m.representant].lt),
                "md": _md_json(tree, m.representant, tree.md[m.representant]),
            }
            for m in pqs.modules
        ],
        "qnodes": [{"id": q, "order": w.tokens()} for q, w in sorted(pqs.qorder.items())],
        "pnodes": [{"id": p, "components": list(qs)} for p, qs in enumerate(pqs.pnodes)],
        "slot_orders": [w.tokens() for w in slot_orders(pqs)],
    }


def tree_dot(tree: PQSMTree) -> str:
    pqs = tree.pqs
    lines = ["graph pqsm {"]
    for q, w in sorted(pqs.qorder.items()):
        lines.append(f'  Q{q} [shape=ellipse, label="Q{q}\\n{" ".join(w.tokens())}"];')
    for p, qs in enumerate(pqs.pnodes):
        lines.append(f'  P{p} [shape=box, label="P{p}"];')
        lines += [f"  P{p} -- Q{q};" for q in qs]
    for m in pqs.modules:
        r = m.representant
        for j in (0, 1):
            lines.append(f'  S{r}_{j} [shape=plain, label="S{r}^{j}"];')
            lines.append(f"  Q{m.component} -- S{r}_{j};")
        counter = [0]

        def emit(node: MDNode, parent: str) -> None:
            counter[0] += 1
            name = f"M{r}_{counter[0]}"
            if node.is_leaf:
                (v,) = node.vertices
                lines.append(f'  {name} [shape=plain, label="v{v}"];')
            else:
                label = node.kind.value
                if label == "prime":
                    label += f"\\n|Pi|={len(m_node_orderings(tree, r, node))}"
                lines.append(f'  {name} [shape=diamond, label="{label}"];')
                for c in node.children:
                    emit(c, name)
            lines.append(f"  {parent} -- {name};")

        emit(tree.md[r], f"S{r}_0")
    lines.append("}")
    return "\n".join(lines)


# --- commands ------------------------------------------------------------------------


def cmd_normalize(args) -> int:
    m = load_document(_read(args.file))
    print(dump_document(_normalized(m)))
    return 0


def cmd_overlap(args) -> int:
    m = load_document(_read(args.file))
    for u, v in arcs_to_chords(_normalized(m)).graph.edges():
        print(u, v)
    return 0


def cmd_tree(args) -> int:
    tree = _tree(load_document(_read(args.file)))
    if args.dot:
        print(tree_dot(tree))
    else:
        print(json.dumps(tree_json(tree), indent=2))
    return 0


def cmd_enumerate(args) -> int:
    tree = _tree(load_document(_read(args.file)))
    for i, w in enumerate(iter_conformal(tree)):
        if args.limit is not None and i >= args.limit:
            break
        print(_word_line(w))
    return 0


def cmd_canon(args) -> int:
    m = load_document(_read(args.file))
    print(" ".join(str(x) for x in canonize(m)))
    return 0


def cmd_iso(args) -> int:
    a = load_document(Path(args.a).read_text())
    b = load_document(Path(args.b).read_text())
    same = canonize(a) == canonize(b)
    print("isomorphic" if same else "not isomorphic")
    return 0 if same else 1


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return 0 if run_selftest(args.n, out=sys.stdout) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="carc", description="Circular-arc models, conformal model enumeration and canonical forms.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn, text in (
        ("normalize", cmd_normalize, "print a normalized model of the input"),
        ("overlap", cmd_overlap, "print the edges of the overlap graph"),
        ("canon", cmd_canon, "print the canonical sequence"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("file", nargs="?", help="model document (default: stdin)")
        p.set_defaults(func=fn)
    p = sub.add_parser("tree", help="print the PQSM-tree")
    p.add_argument("file", nargs="?")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_tree)
    p = sub.add_parser("enumerate", help="stream all conformal models")
    p.add_argument("file", nargs="?")
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)
    p = sub.add_parser("iso", help="exit 0 iff the two models have isomorphic graphs")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)
    p = sub.add_parser("selftest", help="compare against brute force up to n vertices")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NormalizationError as exc:
        print(f"normalization failed: {exc}", file=sys.stderr)
        return EXIT_NORMALIZE
    except EnumerationCapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
