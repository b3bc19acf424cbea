"""Nondeterministic one-way d-dimensional cellular automata.

A cell's neighborhood is itself plus its d coordinate successors; reads past
the edge give ``#``.  The transition table maps (state, neighbor states) to a
set of next states; missing entries block.  Acceptance looks at the state of
cell (1,...,1) in the last configuration of a computation of prescribed
length.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import AlphabetError, CapExceeded, ContractViolation, ParseError
from .pictures import BORDER, Picture

DEFAULT_LAYER_CAP = 1_000_000
DEFAULT_SUCCESSOR_CAP = 1_000_000

Neighbors = tuple[str, ...]


@dataclass(frozen=True)
class CellularAutomaton:
    """Explicit-table one-way cellular automaton."""

    d: int
    sigma: tuple[str, ...]
    gamma: tuple[str, ...]
    accepting: frozenset[str]
    delta: dict[tuple[str, Neighbors], tuple[str, ...]]

    def __post_init__(self) -> None:
        states = set(self.gamma)
        if not set(self.sigma) <= states:
            raise AlphabetError("input alphabet must be contained in the state set")
        if not self.accepting <= states:
            raise AlphabetError("accepting states must be contained in the state set")
        if BORDER in states:
            raise AlphabetError(f"{BORDER!r} is not a state")
        for (q, neigh), results in self.delta.items():
            if q not in states:
                raise AlphabetError(f"transition source {q!r} is not a state")
            if len(neigh) != self.d:
                raise AlphabetError(f"neighborhood {neigh!r} must list {self.d} symbols")
            for s in neigh:
                if s != BORDER and s not in states:
                    raise AlphabetError(f"neighbor symbol {s!r} unknown")
            for r in results:
                if r not in states:
                    raise AlphabetError(f"transition result {r!r} is not a state")

    def transitions(self, state: str, neighbors: Neighbors) -> tuple[str, ...]:
        """Next states for an observed neighborhood; empty means blocked."""
        return self.delta.get((state, neighbors), ())

    def is_accepting(self, state: str) -> bool:
        return state in self.accepting

    def is_deterministic(self) -> bool:
        return all(len(r) == 1 for r in self.delta.values())


def _neighborhood(config: Picture, a: tuple[int, ...]) -> Neighbors:
    out = []
    for i in range(config.d):
        if a[i] == config.n:
            out.append(BORDER)
        else:
            b = a[:i] + (a[i] + 1,) + a[i + 1 :]
            out.append(config[b])
    return tuple(out)


def _cell_options(A: CellularAutomaton, config: Picture) -> list[tuple[str, ...]] | None:
    """Per-cell admissible next states, or None if some cell is blocked."""
    options = []
    for a in config.domain():
        res = A.transitions(config[a], _neighborhood(config, a))
        if not res:
            return None
        options.append(tuple(dict.fromkeys(res)))
    return options


def step_successors(
    A: CellularAutomaton, config: Picture, cap: int = DEFAULT_SUCCESSOR_CAP
) -> set[Picture]:
    """All successor configurations of a configuration."""
    options = _cell_options(A, config)
    if options is None:
        return set()
    count = 1
    for opts in options:
        count *= len(opts)
        if count > cap:
            raise CapExceeded(f"successor product exceeds cap {cap}")
    gamma = tuple(A.gamma)
    return {
        Picture(config.d, config.n, gamma, cells) for cells in itertools.product(*options)
    }


def _successor_cells(
    A: CellularAutomaton, config: Picture
) -> Iterator[tuple[str, ...]]:
    options = _cell_options(A, config)
    if options is None:
        return
    yield from itertools.product(*options)


def accepts_in_time(
    A: CellularAutomaton,
    p: Picture,
    T: int,
    layer_cap: int = DEFAULT_LAYER_CAP,
) -> bool:
    """True iff some computation p = p_1, ..., p_T ends with cell 1^d accepting.

    Layered search: the set of configurations reachable at each step, deduped.
    """
    if T <= p.n:
        raise ContractViolation(f"time bound {T} must exceed the side {p.n}")
    if not set(p.alphabet) <= set(A.sigma):
        raise AlphabetError("input picture alphabet not contained in the automaton's")
    if p.d != A.d:
        raise ContractViolation(f"automaton dimension {A.d} != picture dimension {p.d}")
    gamma = tuple(A.gamma)
    layer: set[tuple[str, ...]] = {p.cells}
    for _ in range(T - 1):
        nxt: set[tuple[str, ...]] = set()
        for cells in layer:
            config = Picture(p.d, p.n, gamma, cells)
            for succ in _successor_cells(A, config):
                nxt.add(succ)
                if len(nxt) > layer_cap:
                    raise CapExceeded(f"reachable-configuration layer exceeds cap {layer_cap}")
        layer = nxt
        if not layer:
            return False
    return any(A.is_accepting(cells[0]) for cells in layer)


def accepts_linear(A: CellularAutomaton, p: Picture, c: int, cprime: int = 0, **kw) -> bool:
    """Acceptance in time c*n + c'; real time is c=1, c'=1."""
    T = c * p.n + cprime
    return accepts_in_time(A, p, T, **kw)


def run_deterministic(A: CellularAutomaton, p: Picture, T: int) -> Picture | None:
    """Iterate the unique computation of a deterministic automaton; None if blocked."""
    if not A.is_deterministic():
        raise ContractViolation("automaton is nondeterministic")
    gamma = tuple(A.gamma)
    config = Picture(p.d, p.n, gamma, p.cells)
    for _ in range(T - 1):
        options = _cell_options(A, config)
        if options is None:
            return None
        config = Picture(p.d, p.n, gamma, tuple(o[0] for o in options))
    return config


# -- JSON file format ----------------------------------------------------------


def automaton_to_json(A: CellularAutomaton) -> str:
    entries = []
    for (q, neigh), results in sorted(A.delta.items()):
        entries.append({"state": q, "neighbors": list(neigh), "results": list(results)})
    doc = {
        "d": A.d,
        "sigma": list(A.sigma),
        "gamma": list(A.gamma),
        "accepting": sorted(A.accepting),
        "delta": entries,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def automaton_from_json(text: str) -> CellularAutomaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad automaton JSON: {exc}") from exc
    try:
        delta: dict[tuple[str, Neighbors], tuple[str, ...]] = {}
        for entry in doc["delta"]:
            key = (entry["state"], tuple(entry["neighbors"]))
            delta[key] = tuple(entry["results"])
        return CellularAutomaton(
            d=int(doc["d"]),
            sigma=tuple(doc["sigma"]),
            gamma=tuple(doc["gamma"]),
            accepting=frozenset(doc["accepting"]),
            delta=delta,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad automaton document: {exc}") from exc
