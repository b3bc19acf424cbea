"""The four cross-formalism compilers: tiling systems to/from monadic pixel
sentences, and one-way cellular automata to/from coordinate sentences.

The tiling direction guesses one monadic symbol per auxiliary color and emits
the guarded localized shape directly, so the reverse compiler can read the
tile sets off the complete truth tables of the three slot formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .automata import CellularAutomaton
from .errors import CapExceeded, ContractViolation, FragmentError
from .logic import (
    And,
    EsoSentence,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Rel,
    Signature,
    Term,
    Xor,
    atoms_of,
    is_sorted,
    land,
    lor,
    strip_universal_prefix,
)
from .normalize import LocalizedView, as_localized, localize_pixel_sentence
from .pictures import BORDER
from .tiling import TileSet, TilingSystem

DEFAULT_COLOR_CAP = 4096

COLOR_PREFIX = "G:"
STATE_PREFIX = "S:"


# -- tiling system -> monadic pixel sentence --------------------------------------


def _theta(colors: Sequence[str], color: str, t: Term) -> Formula:
    """Complete conjunction describing exactly one color at a cell."""
    lits: list[Formula] = []
    for c in colors:
        atom = Rel(COLOR_PREFIX + c, (t,))
        lits.append(atom if c == color else Not(atom))
    return land(lits)


def tiling_to_sentence(ts: TilingSystem) -> EsoSentence:
    """Guess one monadic symbol per auxiliary color; assert per-dimension tile
    admissibility under the localized guards plus projection consistency."""
    d = ts.d
    sig = Signature("pixel", d, tuple(ts.sigma))
    var = "x"
    x = Term(var)
    colors = list(ts.gamma)

    def theta(color: str, t: Term) -> Formula:
        return _theta(colors, color, t)

    consistency = lor(
        [
            land(
                [theta(g, x), Rel(f"Q_{ts.projection[g]}", (x,))]
                + [Not(Rel(f"Q_{s}", (x,))) for s in ts.sigma if s != ts.projection[g]]
            )
            for g in colors
        ]
    )
    view = LocalizedView(
        sig,
        tuple((COLOR_PREFIX + g, 1) for g in colors),
        var,
        {},
        {},
        {},
    )
    for i in range(1, d + 1):
        tiles = ts.deltas[i - 1].tiles
        view.at_min[i] = [
            lor([theta(g, x) for g in colors if (BORDER, g) in tiles])
        ]
        view.at_max[i] = [
            lor([theta(g, x) for g in colors if (g, BORDER) in tiles])
        ]
        view.inner[i] = [
            lor(
                [
                    land([theta(g, x), theta(g2, x.shifted(i))])
                    for g in colors
                    for g2 in colors
                    if (g, g2) in tiles
                ]
            )
        ]
    view.at_max[1].append(consistency)
    view.inner[1].append(consistency)
    if d >= 2 and any((BORDER, BORDER) not in ts.deltas[i].tiles for i in range(d)):
        # bordered pictures of dimension >= 2 always contain (#,#)-adjacent
        # pairs, so the local language is empty
        view.at_max[1].append(Or(()))
        view.inner[1].append(Or(()))
    return view.to_sentence()


# -- monadic pixel sentence -> tiling system ----------------------------------------


def _eval_slot(f: Formula, var: str, here: dict[str, bool], there: dict[str, bool] | None) -> bool:
    """Evaluate a slot formula under truth assignments for the unary symbols at
    the cell (`here`) and at its successor (`there`)."""
    if isinstance(f, Rel):
        (t,) = f.args
        if t.sucs == ():
            return here[f.name]
        if there is None:
            raise FragmentError("successor atom in a min/max slot")
        return there[f.name]
    if isinstance(f, Not):
        return not _eval_slot(f.sub, var, here, there)
    if isinstance(f, And):
        return all(_eval_slot(s, var, here, there) for s in f.subs)
    if isinstance(f, Or):
        return any(_eval_slot(s, var, here, there) for s in f.subs)
    if isinstance(f, Implies):
        return (not _eval_slot(f.left, var, here, there)) or _eval_slot(f.right, var, here, there)
    if isinstance(f, Iff):
        return _eval_slot(f.left, var, here, there) == _eval_slot(f.right, var, here, there)
    if isinstance(f, Xor):
        return _eval_slot(f.left, var, here, there) != _eval_slot(f.right, var, here, there)
    raise FragmentError(f"unexpected node in localized slot: {f!r}")


def sentence_to_tiling(s: EsoSentence, color_cap: int = DEFAULT_COLOR_CAP) -> TilingSystem:
    """Compile a monadic one-variable pixel sentence into a tiling system via
    the complete disjunctive normal form of its localized slots."""
    view = as_localized(s)
    if view is None:
        view = as_localized(localize_pixel_sentence(s))
        assert view is not None
    sig = view.signature
    d = sig.d
    inputs = [f"Q_{a}" for a in sig.alphabet]
    guessed = [name for name, _ in view.guessed]
    symbols = inputs + guessed
    m, k = len(inputs), len(symbols)
    n_colors = m * (1 << (k - m))
    if n_colors > color_cap:
        raise CapExceeded(f"{n_colors} colors exceed the cap {color_cap}")

    def color_name(bits: tuple[bool, ...]) -> str:
        return "c" + "".join("1" if b else "0" for b in bits)

    colors: list[tuple[bool, ...]] = []
    projection: dict[str, str] = {}
    for hot in range(m):
        for rest in itertools.product((False, True), repeat=k - m):
            bits = tuple(i == hot for i in range(m)) + rest
            colors.append(bits)
            projection[color_name(bits)] = sig.alphabet[hot]

    def assignment(bits: tuple[bool, ...]) -> dict[str, bool]:
        return dict(zip(symbols, bits))

    deltas = []
    for i in range(1, d + 1):
        m_i = land(view.at_min.get(i) or [And(())])
        M_i = land(view.at_max.get(i) or [And(())])
        psi_i = land(view.inner.get(i) or [And(())])
        tiles: set[tuple[str, str]] = {(BORDER, BORDER)}
        for bits in colors:
            here = assignment(bits)
            if _eval_slot(m_i, view.var, here, None):
                tiles.add((BORDER, color_name(bits)))
            if _eval_slot(M_i, view.var, here, None):
                tiles.add((color_name(bits), BORDER))
            for bits2 in colors:
                if _eval_slot(psi_i, view.var, here, assignment(bits2)):
                    tiles.add((color_name(bits), color_name(bits2)))
        deltas.append(TileSet(i, frozenset(tiles)))
    gamma = tuple(color_name(b) for b in colors)
    return TilingSystem(tuple(sig.alphabet), gamma, projection, tuple(deltas))
