"""Local picture languages via per-dimension tile sets, and their projections.

A tile (u, v) in the j-th tile set constrains every pair (cell, j-successor)
of the bordered picture, in that order.  A tiling system adds an auxiliary
alphabet and a projection; membership is decided by backtracking over
labelings in lexicographic cell order with forward checking.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import AlphabetError, CapExceeded, FragmentError, ParseError
from .pictures import BORDER, Picture

Tile = tuple[str, str]

DEFAULT_ENUMERATION_CAP = 2_000_000


@dataclass(frozen=True)
class TileSet:
    """Tiles constraining adjacency along one dimension."""

    dimension: int
    tiles: frozenset[Tile]

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise FragmentError("tile set dimension index must be >= 1")


@dataclass(frozen=True)
class TilingSystem:
    """Input alphabet, auxiliary alphabet, projection and d tile sets."""

    sigma: tuple[str, ...]
    gamma: tuple[str, ...]
    projection: dict[str, str]
    deltas: tuple[TileSet, ...]

    def __post_init__(self) -> None:
        if not self.sigma:
            raise AlphabetError("input alphabet must be nonempty")
        if BORDER in self.sigma or BORDER in self.gamma:
            raise AlphabetError(f"{BORDER!r} may not appear in alphabets")
        if set(self.projection.keys()) != set(self.gamma):
            raise AlphabetError("projection must be total on the auxiliary alphabet")
        if set(self.projection.values()) != set(self.sigma):
            raise AlphabetError("projection must be surjective onto the input alphabet")
        for j, ts in enumerate(self.deltas, start=1):
            if ts.dimension != j:
                raise FragmentError(f"tile set {j} tagged with dimension {ts.dimension}")
            allowed = set(self.gamma) | {BORDER}
            for u, v in ts.tiles:
                if u not in allowed or v not in allowed:
                    raise AlphabetError(f"tile ({u!r},{v!r}) uses symbols outside the alphabet")

    @property
    def d(self) -> int:
        return len(self.deltas)


def _delta_sets(deltas: Sequence[TileSet]) -> list[frozenset[Tile]]:
    return [ts.tiles for ts in deltas]


def is_locally_tiled(p: Picture, deltas: Sequence[TileSet], gamma: Sequence[str] | None = None) -> bool:
    """True iff every j-adjacent pair of the bordered picture is in the j-th set."""
    if gamma is not None and not set(p.alphabet) <= set(gamma):
        raise AlphabetError("picture alphabet is not contained in the auxiliary alphabet")
    if len(deltas) != p.d:
        raise FragmentError(f"need {p.d} tile sets, got {len(deltas)}")
    sets = _delta_sets(deltas)
    n, d = p.n, p.d
    # Pairs with both cells on the border read (#,#); they exist iff d >= 2.
    if d >= 2 and any((BORDER, BORDER) not in s for s in sets):
        return False
    for a in p.domain():
        sym = p[a]
        for j in range(d):
            if a[j] == 1 and (BORDER, sym) not in sets[j]:
                return False
            if a[j] == n:
                if (sym, BORDER) not in sets[j]:
                    return False
            else:
                b = a[:j] + (a[j] + 1,) + a[j + 1 :]
                if (sym, p[b]) not in sets[j]:
                    return False
    return True


def _search_labelings(
    p: Picture,
    candidates: dict[tuple[int, ...], list[str]],
    sets: list[frozenset[Tile]],
) -> Iterator[dict[tuple[int, ...], str]]:
    """Backtracking over cells in lexicographic order with forward checking."""
    cells = list(p.domain())
    n, d = p.n, p.d
    assignment: dict[tuple[int, ...], str] = {}

    def consistent(a: tuple[int, ...], sym: str) -> bool:
        for j in range(d):
            if a[j] == 1 and (BORDER, sym) not in sets[j]:
                return False
            if a[j] == n and (sym, BORDER) not in sets[j]:
                return False
            if a[j] > 1:
                b = a[:j] + (a[j] - 1,) + a[j + 1 :]
                if b in assignment and (assignment[b], sym) not in sets[j]:
                    return False
        return True

    def extend(i: int) -> Iterator[dict[tuple[int, ...], str]]:
        if i == len(cells):
            yield dict(assignment)
            return
        a = cells[i]
        for sym in candidates[a]:
            if consistent(a, sym):
                assignment[a] = sym
                yield from extend(i + 1)
                del assignment[a]

    if d >= 2 and any((BORDER, BORDER) not in s for s in sets):
        return
    yield from extend(0)


def tiling_witness(system: TilingSystem, p: Picture) -> Picture | None:
    """A labeling over the auxiliary alphabet witnessing membership, or None."""
    if not set(p.alphabet) <= set(system.sigma):
        raise AlphabetError("picture alphabet is not contained in the input alphabet")
    if p.d != system.d:
        raise FragmentError(f"system has dimension {system.d}, picture has {p.d}")
    fibers: dict[str, list[str]] = {s: [] for s in system.sigma}
    for g in system.gamma:
        fibers[system.projection[g]].append(g)
    candidates = {a: fibers[p[a]] for a in p.domain()}
    sets = _delta_sets(system.deltas)
    for labeling in _search_labelings(p, candidates, sets):
        cells = tuple(labeling[a] for a in p.domain())
        return Picture(p.d, p.n, tuple(system.gamma), cells)
    return None


def recognizes(system: TilingSystem, p: Picture) -> bool:
    """Membership in the projection of the local language."""
    return tiling_witness(system, p) is not None


def enumerate_local_members(
    deltas: Sequence[TileSet],
    gamma: Sequence[str],
    n: int,
    d: int | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[Picture]:
    """All pictures of side n tiled by the given sets, lexicographic cell order."""
    if d is None:
        d = len(deltas)
    if len(deltas) != d:
        raise FragmentError(f"need {d} tile sets, got {len(deltas)}")
    if n * len(gamma) ** (n**d) > cap:
        raise CapExceeded(
            f"enumeration of {len(gamma)}^{n ** d} side-{n} pictures exceeds the cap {cap}"
        )
    template = Picture(d, n, tuple(gamma), (gamma[0],) * (n**d)) if gamma else None
    if template is None:
        return []
    candidates = {a: list(gamma) for a in template.domain()}
    sets = _delta_sets(deltas)
    out = []
    for labeling in _search_labelings(template, candidates, sets):
        cells = tuple(labeling[a] for a in template.domain())
        out.append(Picture(d, n, tuple(gamma), cells))
    out.sort(key=lambda q: q.cells)
    return out


# -- JSON file format ----------------------------------------------------------


def tiling_to_json(system: TilingSystem) -> str:
    doc = {
        "sigma": list(system.sigma),
        "gamma": list(system.gamma),
        "pi": dict(system.projection),
        "deltas": [sorted([list(t) for t in ts.tiles]) for ts in system.deltas],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def tiling_from_json(text: str) -> TilingSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad tiling-system JSON: {exc}") from exc
    try:
        sigma = tuple(doc["sigma"])
        gamma = tuple(doc["gamma"])
        pi = dict(doc["pi"])
        deltas = tuple(
            TileSet(j, frozenset((u, v) for u, v in tiles))
            for j, tiles in enumerate(doc["deltas"], start=1)
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad tiling-system document: {exc}") from exc
    return TilingSystem(sigma, gamma, pi, deltas)


def all_pairs_delta(gamma: Sequence[str], d: int) -> tuple[TileSet, ...]:
    """The maximal tile sets over gamma; tiles every picture."""
    symbols = list(gamma) + [BORDER]
    full = frozenset(itertools.product(symbols, symbols))
    return tuple(TileSet(j, full) for j in range(1, d + 1))
