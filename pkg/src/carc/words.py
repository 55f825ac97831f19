"""Circular and linear words over superscripted letters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, NamedTuple, Optional, Sequence


class Letter(NamedTuple):
    symbol: Hashable
    sup: Optional[int] = None

    def swapped(self) -> "Letter":
        if self.sup is None:
            return self
        return Letter(self.symbol, 1 - self.sup)

    def __repr__(self) -> str:
        return format_letter(self)


def symbol_key(s) -> tuple:
    """Total order over mixed symbols: ints, then strings, then tuples."""
    if isinstance(s, bool):
        return (0, int(s))
    if isinstance(s, int):
        return (0, s)
    if isinstance(s, str):
        return (1, s)
    if isinstance(s, tuple):
        return (2, tuple(symbol_key(x) for x in s))
    return (3, repr(s))


def letter_key(x: Letter) -> tuple:
    return (symbol_key(x.symbol), -1 if x.sup is None else x.sup)


def format_letter(x: Letter) -> str:
    s = x.symbol
    if isinstance(s, int) and not isinstance(s, bool):
        name = f"v{s}"
    elif isinstance(s, tuple):
        name = "".join(str(p) for p in s)
    else:
        name = str(s)
    return name if x.sup is None else f"{name}^{x.sup}"


def least_rotation_index(seq: Sequence) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) + list(seq)
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


class CircularWord:
    """A word up to rotation, stored as its least rotation."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        seq = tuple(x if isinstance(x, Letter) else Letter(*x) for x in letters)
        if len(set(seq)) != len(seq):
            raise ValueError("circular word has a repeated letter")
        k = least_rotation_index([letter_key(x) for x in seq])
        self.letters: tuple[Letter, ...] = seq[k:] + seq[:k]
        self._hash = hash(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, CircularWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "CircularWord") -> bool:
        return [letter_key(x) for x in self.letters] < [letter_key(x) for x in other.letters]

    def __repr__(self) -> str:
        return "CircularWord(" + " ".join(format_letter(x) for x in self.letters) + ")"

    def symbols(self) -> set:
        return {x.symbol for x in self.letters}

    def positions(self) -> dict[Letter, int]:
        return {x: i for i, x in enumerate(self.letters)}

    def rotated_to(self, first: Letter) -> tuple[Letter, ...]:
        i = self.letters.index(first)
        return self.letters[i:] + self.letters[:i]

    def tokens(self) -> list[str]:
        return [format_letter(x) for x in self.letters]


@dataclass(frozen=True)
class OrientedPermutationModel:
    tau0: tuple[Letter, ...]
    tau1: tuple[Letter, ...]

    def __post_init__(self):
        s0 = [x.symbol for x in self.tau0]
        s1 = [x.symbol for x in self.tau1]
        if len(set(s0)) != len(s0) or set(s0) != set(s1) or len(s0) != len(s1):
            raise ValueError("tau0 and tau1 must carry one copy of each vertex")
        for a in self.tau0:
            if Letter(a.symbol, 1 - a.sup) not in self.tau1:
                raise ValueError(f"{a!r} lacks its partner in tau1")

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(x.symbol for x in self.tau0)

    def swap(self) -> "OrientedPermutationModel":
        return OrientedPermutationModel(self.tau1, self.tau0)

    def __repr__(self) -> str:
        a = "".join(format_letter(x) for x in self.tau0)
        b = "".join(format_letter(x) for x in self.tau1)
        return f"({a}, {b})"


def as_word(w) -> CircularWord:
    return w if isinstance(w, CircularWord) else CircularWord(w)


def rotate_equal(a, b) -> bool:
    return as_word(a) == as_word(b)


def reflect(w) -> CircularWord:
    w = as_word(w)
    return CircularWord(x.swapped() for x in reversed(w.letters))


def restrict(w, symbols) -> CircularWord:
    symbols = set(symbols)
    return CircularWord(x for x in as_word(w).letters if x.symbol in symbols)


def contiguous_subword(w, letters) -> Optional[tuple[Letter, ...]]:
    """The block formed by `letters` if they are consecutive in `w`, else None."""
    seq = as_word(w).letters
    wanted = set(letters)
    n = len(seq)
    if not wanted:
        return ()
    if not wanted <= set(seq):
        raise ValueError("letters not in word")
    if len(wanted) == n:
        return seq
    inside = [x in wanted for x in seq]
    # a block starts where an outside letter is followed by an inside one
    starts = [i for i in range(n) if inside[i] and not inside[i - 1]]
    if len(starts) != 1:
        return None
    i = starts[0]
    return tuple(seq[(i + j) % n] for j in range(len(wanted)))


def _runs(seq: Sequence[Letter], member: set) -> list[tuple[Letter, ...]]:
    n = len(seq)
    inside = [x.symbol in member for x in seq]
    starts = [i for i in range(n) if inside[i] and not inside[i - 1]]
    out = []
    for i in starts:
        run = []
        j = i
        while inside[j % n] and len(run) < n:
            run.append(seq[j % n])
            j += 1
        out.append(tuple(run))
    return out


def _is_copy(block: Sequence[Letter], U: set) -> bool:
    syms = [x.symbol for x in block]
    return len(syms) == len(U) and set(syms) == U


def _orient(a: tuple, b: tuple, U: set) -> OrientedPermutationModel:
    r = min(U, key=symbol_key)
    if Letter(r, 0) in a:
        return OrientedPermutationModel(a, b)
    return OrientedPermutationModel(b, a)


def consistent_permutation_model(w, U) -> Optional[OrientedPermutationModel]:
    """Split the letters of U into two contiguous superscripted copies of U.

    The first block of the result holds r^0 for the least symbol r of U.
    When U covers the whole word several splits may exist; the one whose
    blocks are least under the letter order is returned.
    """
    U = set(U)
    if not U:
        return None
    seq = as_word(w).letters
    k = len(U)
    if sum(1 for x in seq if x.symbol in U) != 2 * k:
        raise ValueError("every vertex of U must contribute two letters")
    if len(seq) == 2 * k:
        best = None
        for i in range(k):
            rot = seq[i:] + seq[:i]
            a, b = rot[:k], rot[k:]
            if _is_copy(a, U) and _is_copy(b, U):
                cand = _orient(a, b, U)
                key = ([letter_key(x) for x in cand.tau0], [letter_key(x) for x in cand.tau1])
                if best is None or key < best[0]:
                    best = (key, cand)
        return None if best is None else best[1]
    runs = _runs(seq, U)
    if len(runs) == 1:
        run = runs[0]
        a, b = run[:k], run[k:]
    elif len(runs) == 2:
        a, b = runs
    else:
        return None
    if not (_is_copy(a, U) and _is_copy(b, U)):
        return None
    return _orient(a, b, U)


def parse_letter(token: str) -> Letter:
    """Parse `v<id>^<bit>` (or `v<id>` for a plain letter)."""
    t = token.strip()
    if not t.startswith("v"):
        raise ValueError(f"bad letter token {token!r}")
    body, _, sup = t[1:].partition("^")
    if not body.isdigit():
        raise ValueError(f"bad letter token {token!r}")
    if sup == "":
        return Letter(int(body), None)
    if sup not in ("0", "1"):
        raise ValueError(f"bad superscript in {token!r}")
    return Letter(int(body), int(sup))


def parse_word(tokens) -> CircularWord:
    if isinstance(tokens, str):
        tokens = [t for t in tokens.replace(",", " ").split() if t]
    return CircularWord(parse_letter(t) for t in tokens)


def vertex_word(pairs: Iterable[tuple[int, int]]) -> CircularWord:
    return CircularWord(Letter(v, j) for v, j in pairs)
