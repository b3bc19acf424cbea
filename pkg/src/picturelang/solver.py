"""A small complete SAT layer: boolean circuits, Tseitin encoding, DPLL.

Used by the model checker to decide existential second-order sentences whose
guessed relations are too large for direct enumeration.  Exact, never an
approximation; deterministic branching makes found models reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

# Circuit nodes are tuples:
#   ("const", bool) | ("var", v) | ("not", c) | ("and", (c, ...)) |
#   ("or", (c, ...)) | ("xor", a, b) | ("iff", a, b)
Circuit = tuple


def const(v: bool) -> Circuit:
    return ("const", v)


def var(v: int) -> Circuit:
    return ("var", v)


def neg(c: Circuit) -> Circuit:
    if c[0] == "const":
        return ("const", not c[1])
    if c[0] == "not":
        return c[1]
    return ("not", c)


def conj(cs: Iterable[Circuit]) -> Circuit:
    flat = []
    for c in cs:
        if c[0] == "const":
            if not c[1]:
                return ("const", False)
        elif c[0] == "and":
            flat.extend(c[1])
        else:
            flat.append(c)
    if not flat:
        return ("const", True)
    if len(flat) == 1:
        return flat[0]
    return ("and", tuple(flat))


def disj(cs: Iterable[Circuit]) -> Circuit:
    flat = []
    for c in cs:
        if c[0] == "const":
            if c[1]:
                return ("const", True)
        elif c[0] == "or":
            flat.extend(c[1])
        else:
            flat.append(c)
    if not flat:
        return ("const", False)
    if len(flat) == 1:
        return flat[0]
    return ("or", tuple(flat))


def xor2(a: Circuit, b: Circuit) -> Circuit:
    for x, y in ((a, b), (b, a)):
        if x[0] == "const":
            return neg(y) if x[1] else y
    return ("xor", a, b)


def iff2(a: Circuit, b: Circuit) -> Circuit:
    for x, y in ((a, b), (b, a)):
        if x[0] == "const":
            return y if x[1] else neg(y)
    return ("iff", a, b)


@dataclass
class CnfBuilder:
    """Tseitin transformation; input variables keep their identities."""

    num_vars: int
    clauses: list[list[int]]

    def fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, clause: Sequence[int]) -> None:
        self.clauses.append(list(clause))

    def encode(self, c: Circuit) -> int:
        kind = c[0]
        if kind == "const":
            lit = self.fresh()
            self.add([lit] if c[1] else [-lit])
            return lit
        if kind == "var":
            return c[1]
        if kind == "not":
            return -self.encode(c[1])
        if kind == "and":
            lits = [self.encode(s) for s in c[1]]
            out = self.fresh()
            for l in lits:
                self.add([-out, l])
            self.add([out] + [-l for l in lits])
            return out
        if kind == "or":
            lits = [self.encode(s) for s in c[1]]
            out = self.fresh()
            for l in lits:
                self.add([-l, out])
            self.add([-out] + lits)
            return out
        if kind == "xor":
            a, b = self.encode(c[1]), self.encode(c[2])
            out = self.fresh()
            self.add([-out, a, b])
            self.add([-out, -a, -b])
            self.add([out, a, -b])
            self.add([out, -a, b])
            return out
        if kind == "iff":
            a, b = self.encode(c[1]), self.encode(c[2])
            out = self.fresh()
            self.add([-out, -a, b])
            self.add([-out, a, -b])
            self.add([out, a, b])
            self.add([out, -a, -b])
            return out
        raise ValueError(f"unknown circuit node {kind!r}")


def satisfiable(circuit: Circuit, num_input_vars: int) -> list[bool] | None:
    """Decide a circuit; on success return values indexed 1..num_input_vars."""
    if circuit[0] == "const":
        return [False] * (num_input_vars + 1) if circuit[1] else None
    builder = CnfBuilder(num_input_vars, [])
    root = builder.encode(circuit)
    builder.add([root])
    model = dpll(builder.num_vars, builder.clauses)
    if model is None:
        return None
    return model[: num_input_vars + 1]


def dpll(num_vars: int, clauses: list[list[int]]) -> list[bool] | None:
    """DPLL with two-watched literals; lowest-index branching, False first."""
    assign = [0] * (num_vars + 1)  # 0 unknown, 1 true, -1 false
    trail: list[int] = []
    units: list[int] = []
    watched: list[list[int]] = []  # clause lists per literal, indexed below
    watch_of: dict[int, list[int]] = {}
    kept: list[list[int]] = []
    for clause in clauses:
        clause = list(dict.fromkeys(clause))
        if not clause:
            return None
        if any(-l in clause for l in clause):
            continue
        if len(clause) == 1:
            units.append(clause[0])
            continue
        ci = len(kept)
        kept.append(clause)
        watch_of.setdefault(clause[0], []).append(ci)
        watch_of.setdefault(clause[1], []).append(ci)

    def value(lit: int) -> int:
        v = assign[abs(lit)]
        return v if lit > 0 else -v

    def propagate(lit: int) -> bool:
        queue = [lit]
        while queue:
            l = queue.pop()
            v, want = abs(l), (1 if l > 0 else -1)
            if assign[v] != 0:
                if assign[v] != want:
                    return False
                continue
            assign[v] = want
            trail.append(v)
            falsified = -l
            watchers = watch_of.get(falsified)
            if not watchers:
                continue
            keep: list[int] = []
            for ci in watchers:
                clause = kept[ci]
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                # now clause[1] == falsified
                if value(clause[0]) == 1:
                    keep.append(ci)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if value(clause[k]) != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        watch_of.setdefault(clause[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(ci)
                other = clause[0]
                ov = value(other)
                if ov == -1:
                    watch_of[falsified] = keep + [c for c in watchers[watchers.index(ci) + 1 :]]
                    return False
                if ov == 0:
                    queue.append(other)
            watch_of[falsified] = keep
        return True

    def backtrack(mark: int) -> None:
        while len(trail) > mark:
            assign[trail.pop()] = 0

    for u in units:
        if not propagate(u):
            return None

    stack: list[tuple[int, bool, int]] = []  # (var, tried_true, trail mark)
    cursor = 1
    while True:
        while cursor <= num_vars and assign[cursor] != 0:
            cursor += 1
        if cursor > num_vars:
            return [False] + [assign[v] == 1 for v in range(1, num_vars + 1)]
        v = cursor
        mark = len(trail)
        if propagate(-v):
            stack.append((v, False, mark))
            continue
        backtrack(mark)
        if propagate(v):
            stack.append((v, True, mark))
            continue
        backtrack(mark)
        while stack:
            v2, tried_true, mark2 = stack.pop()
            backtrack(mark2)
            if not tried_true:
                if propagate(v2):
                    stack.append((v2, True, mark2))
                    cursor = 1
                    break
                backtrack(mark2)
        else:
            return None
        if not stack:
            return None
