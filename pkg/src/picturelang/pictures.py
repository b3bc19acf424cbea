"""Square d-dimensional pictures and their two encodings as finite structures.

A picture is a total map from [1,n]^d to a finite alphabet.  The border
symbol ``#`` and the padding symbol ``□`` are reserved: ``#`` marks the
one-cell shell around a bordered picture and may never appear in any
alphabet; ``□`` fills the cells added when a rectangular picture is squared
and is rejected in user alphabets (it only enters via `square_picture`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import AlphabetError, ContractViolation, ParseError, PictureError

BORDER = "#"
PADDING = "□"  # □
RESERVED = (BORDER, PADDING)


@dataclass(frozen=True)
class Picture:
    """A square d-dimensional picture: cells of [1,n]^d labelled over an alphabet.

    ``cells`` is stored in lexicographic order of coordinate tuples.
    """

    d: int
    n: int
    alphabet: tuple[str, ...]
    cells: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.d < 1 or self.n < 1:
            raise PictureError(f"dimension and side must be positive, got d={self.d}, n={self.n}")
        if BORDER in self.alphabet:
            raise AlphabetError(f"reserved symbol {BORDER!r} may not be in an alphabet")
        if len(self.cells) != self.n**self.d:
            raise PictureError(
                f"expected {self.n ** self.d} cells for side {self.n} in dimension {self.d}, "
                f"got {len(self.cells)}"
            )
        allowed = set(self.alphabet)
        for sym in self.cells:
            if sym not in allowed:
                raise AlphabetError(f"cell symbol {sym!r} not in alphabet {self.alphabet}")

    # -- cell addressing ---------------------------------------------------

    def rank(self, a: Sequence[int]) -> int:
        """Lexicographic rank of a coordinate tuple, 0-based."""
        r = 0
        for c in a:
            r = r * self.n + (c - 1)
        return r

    def coords(self, rank: int) -> tuple[int, ...]:
        """Inverse of `rank`."""
        out = []
        for _ in range(self.d):
            rank, rem = divmod(rank, self.n)
            out.append(rem + 1)
        return tuple(reversed(out))

    def __getitem__(self, a: Sequence[int]) -> str:
        if len(a) != self.d or any(not 1 <= c <= self.n for c in a):
            raise PictureError(f"cell {tuple(a)} outside [1,{self.n}]^{self.d}")
        return self.cells[self.rank(a)]

    def domain(self) -> Iterator[tuple[int, ...]]:
        """All cells in lexicographic order."""
        return itertools.product(range(1, self.n + 1), repeat=self.d)


def make_picture(d: int, n: int, alphabet: Sequence[str], cells: Sequence[str]) -> Picture:
    """Build a picture from its cell list in lexicographic coordinate order.

    Rejects both reserved symbols in the alphabet; this is the user-facing
    constructor.
    """
    if PADDING in alphabet:
        raise AlphabetError(f"reserved symbol {PADDING!r} may not be in a user alphabet")
    return Picture(d, n, tuple(alphabet), tuple(cells))


def word(text: str, alphabet: Sequence[str] | None = None) -> Picture:
    """Convenience constructor: a 1-picture from a string, one symbol per character."""
    if not text:
        raise PictureError("1-pictures are nonempty words")
    if alphabet is None:
        alphabet = tuple(sorted(set(text)))
    return make_picture(1, len(text), alphabet, tuple(text))


def bordered_value(p: Picture, a: Sequence[int]) -> str:
    """Value of the bordered picture p# at a cell of [0,n+1]^d."""
    if len(a) != p.d or any(not 0 <= c <= p.n + 1 for c in a):
        raise PictureError(f"cell {tuple(a)} outside [0,{p.n + 1}]^{p.d}")
    if all(1 <= c <= p.n for c in a):
        return p[a]
    return BORDER


def lex_successor(a: Sequence[int], n: int) -> tuple[int, ...] | None:
    """Successor of a cell in lexicographic order; None for (n,...,n).

    Equals suc_i(suc_{i+1}(...suc_d(a))) for the smallest i whose trailing
    components are all maximal.
    """
    a = tuple(a)
    if any(not 1 <= c <= n for c in a):
        raise PictureError(f"cell {a} outside [1,{n}]^{len(a)}")
    i = len(a) - 1
    while i >= 0 and a[i] == n:
        i -= 1
    if i < 0:
        return None
    return a[:i] + (a[i] + 1,) + (1,) * (len(a) - 1 - i)


# -- finite structures ------------------------------------------------------


@dataclass(frozen=True)
class FiniteStructure:
    """Explicit finite interpretation on the domain [1,m].

    ``relations`` maps a symbol to (arity, set of tuples); ``functions`` maps
    a symbol to a total unary function given as a dict.
    """

    size: int
    relations: dict[str, tuple[int, frozenset[tuple[int, ...]]]]
    functions: dict[str, dict[int, int]]

    def __post_init__(self) -> None:
        if self.size < 1:
            raise PictureError("structure domain must be nonempty")
        for name, (arity, tuples) in self.relations.items():
            for t in tuples:
                if len(t) != arity or any(not 1 <= v <= self.size for v in t):
                    raise PictureError(f"tuple {t} invalid for relation {name} of arity {arity}")
        for name, f in self.functions.items():
            if set(f.keys()) != set(range(1, self.size + 1)):
                raise PictureError(f"function {name} is not total on [1,{self.size}]")
            if any(not 1 <= v <= self.size for v in f.values()):
                raise PictureError(f"function {name} maps outside the domain")

    def holds(self, name: str, t: tuple[int, ...]) -> bool:
        arity, tuples = self.relations[name]
        if len(t) != arity:
            raise PictureError(f"arity mismatch for {name}: expected {arity}, got {len(t)}")
        return t in tuples

    def apply(self, name: str, v: int) -> int:
        return self.functions[name][v]


def pixel_structure(p: Picture) -> FiniteStructure:
    """Encode a picture on the domain of its pixels.

    Domain [1, n^d] identified with [1,n]^d by lexicographic rank.  Unary
    relations Q_s per symbol and min_i/max_i per dimension; unary functions
    suc_i implementing the cyclic successor along each dimension.
    """
    m = p.n**p.d
    letters: dict[str, set[tuple[int, ...]]] = {s: set() for s in p.alphabet}
    mins: dict[int, set[tuple[int, ...]]] = {i: set() for i in range(1, p.d + 1)}
    maxs: dict[int, set[tuple[int, ...]]] = {i: set() for i in range(1, p.d + 1)}
    sucs: dict[int, dict[int, int]] = {i: {} for i in range(1, p.d + 1)}
    for a in p.domain():
        e = p.rank(a) + 1
        letters[p[a]].add((e,))
        for i in range(1, p.d + 1):
            if a[i - 1] == 1:
                mins[i].add((e,))
            if a[i - 1] == p.n:
                maxs[i].add((e,))
            nxt = list(a)
            nxt[i - 1] = a[i - 1] + 1 if a[i - 1] < p.n else 1
            sucs[i][e] = p.rank(nxt) + 1
    relations: dict[str, tuple[int, frozenset[tuple[int, ...]]]] = {}
    for s in p.alphabet:
        relations[f"Q_{s}"] = (1, frozenset(letters[s]))
    for i in range(1, p.d + 1):
        relations[f"min_{i}"] = (1, frozenset(mins[i]))
        relations[f"max_{i}"] = (1, frozenset(maxs[i]))
    functions = {f"suc_{i}": sucs[i] for i in range(1, p.d + 1)}
    return FiniteStructure(m, relations, functions)


def coordinate_structure(p: Picture | "RectPicture") -> FiniteStructure:
    """Encode a picture on the domain [1,n] of its coordinates.

    d-ary relations Q_s, the strict order <, unary min/max and the cyclic
    successor function suc.  A rectangular picture is encoded as the
    coordinate structure of its squared picture.
    """
    if isinstance(p, RectPicture):
        p = square_picture(p)
    n = p.n
    letters: dict[str, set[tuple[int, ...]]] = {s: set() for s in p.alphabet}
    for a in p.domain():
        letters[p[a]].add(tuple(a))
    relations: dict[str, tuple[int, frozenset[tuple[int, ...]]]] = {}
    for s in p.alphabet:
        relations[f"Q_{s}"] = (p.d, frozenset(letters[s]))
    relations["<"] = (2, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))
    relations["min"] = (1, frozenset({(1,)}))
    relations["max"] = (1, frozenset({(n,)}))
    functions = {"suc": {i: (i + 1 if i < n else 1) for i in range(1, n + 1)}}
    return FiniteStructure(n, relations, functions)


# -- rectangular pictures (boundary only) ------------------------------------


@dataclass(frozen=True)
class RectPicture:
    """A general rectangular picture; accepted only at the squaring boundary."""

    d: int
    sides: tuple[int, ...]
    alphabet: tuple[str, ...]
    cells: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.d < 1 or len(self.sides) != self.d or any(s < 1 for s in self.sides):
            raise PictureError(f"invalid sides {self.sides} for dimension {self.d}")
        for sym in RESERVED:
            if sym in self.alphabet:
                raise AlphabetError(f"reserved symbol {sym!r} may not be in an alphabet")
        total = 1
        for s in self.sides:
            total *= s
        if len(self.cells) != total:
            raise PictureError(f"expected {total} cells, got {len(self.cells)}")
        allowed = set(self.alphabet)
        for sym in self.cells:
            if sym not in allowed:
                raise AlphabetError(f"cell symbol {sym!r} not in alphabet {self.alphabet}")

    def __getitem__(self, a: Sequence[int]) -> str:
        r = 0
        for c, s in zip(a, self.sides):
            if not 1 <= c <= s:
                raise PictureError(f"cell {tuple(a)} outside {self.sides}")
            r = r * s + (c - 1)
        return self.cells[r]

    def domain(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(1, s + 1) for s in self.sides))


def square_picture(p: RectPicture | Picture) -> Picture:
    """Pad a rectangular picture with ``□`` up to the cube of side max(sides)."""
    if isinstance(p, Picture):
        return p
    n = max(p.sides)
    alphabet = tuple(p.alphabet) + (PADDING,)
    cells = []
    for a in itertools.product(range(1, n + 1), repeat=p.d):
        inside = all(c <= s for c, s in zip(a, p.sides))
        cells.append(p[a] if inside else PADDING)
    return Picture(p.d, n, alphabet, tuple(cells))


def is_c_balanced(p: RectPicture | Picture, c: int) -> bool:
    """True iff max(sides) <= c * side_i for every dimension i."""
    if c < 1:
        raise ContractViolation("balance factor must be positive")
    sides = (p.n,) * p.d if isinstance(p, Picture) else p.sides
    n = max(sides)
    return all(n <= c * s for s in sides)


# -- bit-exact text format ----------------------------------------------------


def picture_to_text(p: Picture) -> str:
    """Serialize per the documented format: header, alphabet, n^(d-1) rows."""
    lines = [f"{p.d} {p.n}", " ".join(p.alphabet)]
    flat = p.cells
    for start in range(0, len(flat), p.n):
        lines.append(" ".join(flat[start : start + p.n]))
    return "\n".join(lines) + "\n"


def picture_from_text(text: str) -> Picture:
    lines = [ln for ln in text.split("\n") if ln.strip() != ""]
    if len(lines) < 2:
        raise ParseError("picture file needs a 'd n' header and an alphabet line")
    try:
        d_str, n_str = lines[0].split()
        d, n = int(d_str), int(n_str)
    except ValueError as exc:
        raise ParseError(f"bad picture header {lines[0]!r}") from exc
    alphabet = tuple(lines[1].split())
    rows = lines[2:]
    expected_rows = n ** (d - 1)
    if len(rows) != expected_rows:
        raise ParseError(f"expected {expected_rows} rows, got {len(rows)}")
    cells: list[str] = []
    for row in rows:
        syms = row.split()
        if len(syms) != n:
            raise ParseError(f"row {row!r} does not have {n} symbols")
        cells.extend(syms)
    return Picture(d, n, alphabet, tuple(cells))


def enumerate_pictures(d: int, n: int, alphabet: Sequence[str]) -> Iterator[Picture]:
    """All pictures of side n in lexicographic order of their cell lists."""
    for cells in itertools.product(alphabet, repeat=n**d):
        yield Picture(d, n, tuple(alphabet), cells)
