"""Ground-truth semantics: first-order evaluation, brute-force ESO checking,
exhaustive language equivalence, and the built-in counterexample languages.

`check_eso` has two exact engines: enumeration of relation interpretations as
bit-vectors (the reference semantics, capped), and a SAT reduction for
instances beyond the cap.  They agree wherever both apply; a property test
pins that down.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import solver
from .automata import CellularAutomaton, accepts_in_time
from .errors import CapExceeded, ContractViolation, FragmentError
from .logic import (
    And,
    Eq,
    EsoSentence,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Less,
    Not,
    Or,
    Rel,
    Term,
    Xor,
)
from .pictures import (
    FiniteStructure,
    Picture,
    coordinate_structure,
    enumerate_pictures,
    pixel_structure,
)
from .tiling import TilingSystem, recognizes

DEFAULT_ENUM_CAP_BITS = 24
AUTO_ENUM_BITS = 14
DEFAULT_PICTURE_CAP = 1_000_000


# -- first-order evaluation ------------------------------------------------------


def eval_term(S: FiniteStructure, t: Term, env: dict[str, int]) -> int:
    if t.var not in env:
        raise FragmentError(f"unbound variable {t.var!r}")
    v = env[t.var]
    for i in t.sucs:
        name = "suc" if i == 0 else f"suc_{i}"
        if name not in S.functions:
            raise FragmentError(f"uninterpreted function {name!r}")
        v = S.functions[name][v]
    return v


def eval_fo(S: FiniteStructure, f: Formula, env: dict[str, int] | None = None) -> bool:
    """Standard Tarski semantics; quantifiers range over [1, size]."""
    env = env or {}
    if isinstance(f, Rel):
        if f.name not in S.relations:
            raise FragmentError(f"uninterpreted relation {f.name!r}")
        return S.holds(f.name, tuple(eval_term(S, t, env) for t in f.args))
    if isinstance(f, Eq):
        return eval_term(S, f.left, env) == eval_term(S, f.right, env)
    if isinstance(f, Less):
        return eval_term(S, f.left, env) < eval_term(S, f.right, env)
    if isinstance(f, Not):
        return not eval_fo(S, f.sub, env)
    if isinstance(f, And):
        return all(eval_fo(S, s, env) for s in f.subs)
    if isinstance(f, Or):
        return any(eval_fo(S, s, env) for s in f.subs)
    if isinstance(f, Implies):
        return (not eval_fo(S, f.left, env)) or eval_fo(S, f.right, env)
    if isinstance(f, Iff):
        return eval_fo(S, f.left, env) == eval_fo(S, f.right, env)
    if isinstance(f, Xor):
        return eval_fo(S, f.left, env) != eval_fo(S, f.right, env)
    if isinstance(f, (ForAll, Exists)):
        domain = range(1, S.size + 1)
        combine = all if isinstance(f, ForAll) else any
        names = f.vars

        def branches() -> Iterator[bool]:
            for values in itertools.product(domain, repeat=len(names)):
                inner = dict(env)
                inner.update(zip(names, values))
                yield eval_fo(S, f.body, inner)

        return combine(branches())
    raise FragmentError(f"unknown formula node {f!r}")  # pragma: no cover


# -- existential second-order checking --------------------------------------------


def _guessed_layout(
    S: FiniteStructure, sentence: EsoSentence
) -> tuple[list[tuple[str, int, list[tuple[int, ...]]]], int]:
    """Per guessed symbol: its arity and tuple list in lexicographic order."""
    layout = []
    total_bits = 0
    for name, arity in sentence.guessed:
        tuples = list(itertools.product(range(1, S.size + 1), repeat=arity))
        layout.append((name, arity, tuples))
        total_bits += len(tuples)
    return layout, total_bits


def _check_by_enumeration(
    S: FiniteStructure,
    sentence: EsoSentence,
    cap_bits: int,
    want_witness: bool,
):
    layout, total = _guessed_layout(S, sentence)
    running = 0
    for name, _, tuples in layout:
        running += len(tuples)
        if running > cap_bits:
            raise CapExceeded(
                f"guessed symbol {name!r} pushes the enumeration to {total} bits, "
                f"beyond the cap of {cap_bits}"
            )
    spaces = [range(1 << len(tuples)) for _, _, tuples in layout]
    base_relations = dict(S.relations)
    for choice in itertools.product(*spaces):
        relations = dict(base_relations)
        for (name, arity, tuples), bits in zip(layout, choice):
            chosen = frozenset(t for k, t in enumerate(tuples) if (bits >> k) & 1)
            relations[name] = (arity, chosen)
        candidate = FiniteStructure(S.size, relations, S.functions)
        if eval_fo(candidate, sentence.body, {}):
            if want_witness:
                witness = {
                    name: candidate.relations[name][1] for name, _, _ in layout
                }
                return True, witness
            return True, None
    return False, None


def _ground(
    S: FiniteStructure,
    sentence: EsoSentence,
) -> tuple[solver.Circuit, list[tuple[str, int, list[tuple[int, ...]]]]]:
    layout, _ = _guessed_layout(S, sentence)
    var_ids: dict[tuple[str, tuple[int, ...]], int] = {}
    next_id = 0
    for name, _, tuples in layout:
        for t in tuples:
            next_id += 1
            var_ids[(name, t)] = next_id
    guessed = {name for name, _ in sentence.guessed}

    def walk(f: Formula, env: dict[str, int]) -> solver.Circuit:
        if isinstance(f, Rel):
            t = tuple(eval_term(S, a, env) for a in f.args)
            if f.name in guessed:
                return solver.var(var_ids[(f.name, t)])
            return solver.const(S.holds(f.name, t))
        if isinstance(f, Eq):
            return solver.const(eval_term(S, f.left, env) == eval_term(S, f.right, env))
        if isinstance(f, Less):
            return solver.const(eval_term(S, f.left, env) < eval_term(S, f.right, env))
        if isinstance(f, Not):
            return solver.neg(walk(f.sub, env))
        if isinstance(f, And):
            return solver.conj(walk(s, env) for s in f.subs)
        if isinstance(f, Or):
            return solver.disj(walk(s, env) for s in f.subs)
        if isinstance(f, Implies):
            return solver.disj((solver.neg(walk(f.left, env)), walk(f.right, env)))
        if isinstance(f, Iff):
            return solver.iff2(walk(f.left, env), walk(f.right, env))
        if isinstance(f, Xor):
            return solver.xor2(walk(f.left, env), walk(f.right, env))
        if isinstance(f, (ForAll, Exists)):
            domain = range(1, S.size + 1)
            parts = []
            for values in itertools.product(domain, repeat=len(f.vars)):
                inner = dict(env)
                inner.update(zip(f.vars, values))
                parts.append(walk(f.body, inner))
            return solver.conj(parts) if isinstance(f, ForAll) else solver.disj(parts)
        raise FragmentError(f"unknown formula node {f!r}")  # pragma: no cover

    return walk(sentence.body, {}), layout


def _check_by_sat(S: FiniteStructure, sentence: EsoSentence, want_witness: bool):
    circuit, layout = _ground(S, sentence)
    num_vars = sum(len(tuples) for _, _, tuples in layout)
    model = solver.satisfiable(circuit, num_vars)
    if model is None:
        return False, None
    if not want_witness:
        return True, None
    witness: dict[str, frozenset[tuple[int, ...]]] = {}
    k = 0
    for name, _, tuples in layout:
        chosen = set()
        for t in tuples:
            k += 1
            if model[k]:
                chosen.add(t)
        witness[name] = frozenset(chosen)
    return True, witness


def check_eso(
    S: FiniteStructure,
    sentence: EsoSentence,
    method: str = "auto",
    enum_cap_bits: int = DEFAULT_ENUM_CAP_BITS,
    want_witness: bool = False,
):
    """Does some interpretation of the guessed relations satisfy the body?

    method "enumerate" is the reference semantics (bit-vectors in increasing
    numeric order, capped); "sat" is the reduction engine; "auto" enumerates
    small instances and switches to SAT above AUTO_ENUM_BITS.  Both engines
    are exact.
    """
    if not sentence.guessed:
        result = eval_fo(S, sentence.body, {})
        return (result, {} if result else None) if want_witness else result
    _, total_bits = _guessed_layout(S, sentence)
    if method == "auto":
        method = "enumerate" if total_bits <= min(enum_cap_bits, AUTO_ENUM_BITS) else "sat"
    if method == "enumerate":
        result, witness = _check_by_enumeration(S, sentence, enum_cap_bits, want_witness)
    elif method == "sat":
        result, witness = _check_by_sat(S, sentence, want_witness)
    else:
        raise ContractViolation(f"unknown method {method!r}")
    return (result, witness) if want_witness else result


def encode_picture(p: Picture, kind: str) -> FiniteStructure:
    if kind == "pixel":
        return pixel_structure(p)
    if kind == "coordinate":
        return coordinate_structure(p)
    raise ContractViolation(f"unknown encoding kind {kind!r}")


# -- built-in oracle languages -----------------------------------------------------


def mirror_member(p: Picture) -> bool:
    """True iff the picture is invariant under exchanging coordinates 1 and 2."""
    if p.d < 2:
        raise ContractViolation("the mirror language needs dimension >= 2")
    for a in p.domain():
        b = (a[1], a[0]) + a[2:]
        if p[a] != p[b]:
            return False
    return True


def sym_member(p: Picture) -> bool:
    """True iff cell values are invariant under all coordinate permutations and
    all per-coordinate reflections."""
    if p.d < 2:
        raise ContractViolation("the symmetric language needs dimension >= 2")
    n = p.n
    for a in p.domain():
        v = p[a]
        for alpha in itertools.permutations(range(p.d)):
            if p[tuple(a[alpha[i]] for i in range(p.d))] != v:
                return False
        for i in range(p.d):
            b = a[:i] + (n + 1 - a[i],) + a[i + 1 :]
            if p[b] != v:
                return False
    return True


# -- uniform language wrappers ------------------------------------------------------


@dataclass(frozen=True)
class TilingLanguage:
    system: TilingSystem

    @property
    def d(self) -> int:
        return self.system.d

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(self.system.sigma)

    def contains(self, p: Picture) -> bool:
        return recognizes(self.system, p)


@dataclass(frozen=True)
class AutomatonLanguage:
    automaton: CellularAutomaton
    c: int = 1
    cprime: int = 1

    @property
    def d(self) -> int:
        return self.automaton.d

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(self.automaton.sigma)

    def contains(self, p: Picture) -> bool:
        return accepts_in_time(self.automaton, p, self.c * p.n + self.cprime)


@dataclass(frozen=True)
class SentenceLanguage:
    sentence: EsoSentence
    method: str = "auto"

    @property
    def d(self) -> int:
        return self.sentence.signature.d

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(self.sentence.signature.alphabet)

    def contains(self, p: Picture) -> bool:
        S = encode_picture(p, self.sentence.signature.kind)
        return check_eso(S, self.sentence, method=self.method)


@dataclass(frozen=True)
class OracleLanguage:
    name: str
    dimension: int
    symbols: tuple[str, ...] = ("0", "1")

    @property
    def d(self) -> int:
        return self.dimension

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.symbols

    def contains(self, p: Picture) -> bool:
        if self.name == "mirror":
            return mirror_member(p)
        if self.name == "sym":
            return sym_member(p)
        raise ContractViolation(f"unknown oracle {self.name!r}")


@dataclass(frozen=True)
class FiniteLanguage:
    dimension: int
    symbols: tuple[str, ...]
    members: frozenset[tuple[int, tuple[str, ...]]]  # (side, cells)

    @property
    def d(self) -> int:
        return self.dimension

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.symbols

    def contains(self, p: Picture) -> bool:
        return (p.n, p.cells) in self.members


@dataclass(frozen=True)
class Counterexample:
    picture: Picture
    verdict_a: bool
    verdict_b: bool

    def __post_init__(self) -> None:
        if self.verdict_a == self.verdict_b:
            raise ContractViolation("a counterexample requires differing verdicts")


def equivalent_up_to(
    a,
    b,
    d: int,
    alphabet: Sequence[str],
    max_n: int,
    picture_cap: int = DEFAULT_PICTURE_CAP,
) -> Counterexample | None:
    """Compare two language definitions on every picture of side 1..max_n.

    Returns the lexicographically first disagreement, or None.
    """
    if a.d != d or b.d != d:
        raise ContractViolation("language definitions disagree on the dimension")
    alphabet = tuple(alphabet)
    total = sum(len(alphabet) ** (n**d) for n in range(1, max_n + 1))
    if total > picture_cap:
        raise CapExceeded(f"{total} candidate pictures exceed the cap {picture_cap}")
    for n in range(1, max_n + 1):
        for p in enumerate_pictures(d, n, alphabet):
            va = a.contains(p)
            vb = b.contains(p)
            if va != vb:
                return Counterexample(p, va, vb)
    return None
