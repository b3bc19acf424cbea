"""Normalizations of ESO sentences: localization of monadic pixel sentences,
cardinality-to-monadic translation, Skolemization to a universal prefix, and
arity reduction.

The localizer rewrites any monadic one-universal-variable pixel sentence into
the guarded three-clause shape (min_i / max_i / not-max_i per dimension) whose
inner formulas mention only depth-zero atoms, or the cell's i-successor inside
the not-max_i clause.  Extremal predicates are reified into guessed monadic
symbols and successor chains are eliminated through shifted copies; cyclic
wrap-around is transported exactly through carrier relations pinned at the
min side of each row.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

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
    Signature,
    Term,
    Xor,
    atoms_of,
    free_vars,
    is_quantifier_free,
    land,
    lor,
    map_atoms,
    rename_vars,
    strip_universal_prefix,
    subst_terms,
)

DEFAULT_SHIFT_DEPTH_CAP = 8
DEFAULT_THRESHOLD_CAP = 16


# -- localized view -------------------------------------------------------------


@dataclass
class LocalizedView:
    """The three guarded slots per dimension of a localized pixel sentence."""

    signature: Signature
    guessed: tuple[tuple[str, int], ...]
    var: str
    at_min: dict[int, list[Formula]]
    at_max: dict[int, list[Formula]]
    inner: dict[int, list[Formula]]

    def to_sentence(self) -> EsoSentence:
        d = self.signature.d
        x = Term(self.var)
        conjuncts: list[Formula] = []
        for i in range(1, d + 1):
            conjuncts.append(Implies(Rel(f"min_{i}", (x,)), land(self.at_min.get(i) or [And(())])))
            conjuncts.append(Implies(Rel(f"max_{i}", (x,)), land(self.at_max.get(i) or [And(())])))
            conjuncts.append(
                Implies(Not(Rel(f"max_{i}", (x,))), land(self.inner.get(i) or [And(())]))
            )
        return EsoSentence(self.signature, self.guessed, ForAll((self.var,), And(tuple(conjuncts))))


def _slot_atoms_ok(f: Formula, var: str, dim: int | None) -> bool:
    """Slot payloads may only mention letter/guessed symbols at x, or (inside
    the not-max_i slot) at suc_i(x)."""
    for atom in atoms_of(f):
        if not isinstance(atom, Rel):
            return False
        if atom.name.startswith(("min_", "max_")):
            return False
        if len(atom.args) != 1:
            return False
        t = atom.args[0]
        if t.var != var:
            return False
        if t.sucs == ():
            continue
        if dim is not None and t.sucs == (dim,):
            continue
        return False
    return True


def as_localized(s: EsoSentence) -> LocalizedView | None:
    """Recognize the localized shape; None if the sentence is not in it."""
    if s.signature.kind != "pixel":
        return None
    prefix, matrix = strip_universal_prefix(s.body)
    if len(prefix) != 1 or not is_quantifier_free(matrix):
        return None
    var = prefix[0]
    d = s.signature.d
    view = LocalizedView(s.signature, s.guessed, var, {}, {}, {})
    conjuncts = list(matrix.subs) if isinstance(matrix, And) else [matrix]
    for c in conjuncts:
        if not isinstance(c, Implies):
            return None
        guard, payload = c.left, c.right
        if isinstance(guard, Rel) and guard.name.startswith("min_"):
            i = int(guard.name[4:])
            slot, dim, guard_atom = view.at_min, None, guard
        elif isinstance(guard, Rel) and guard.name.startswith("max_"):
            i = int(guard.name[4:])
            slot, dim, guard_atom = view.at_max, None, guard
        elif (
            isinstance(guard, Not)
            and isinstance(guard.sub, Rel)
            and guard.sub.name.startswith("max_")
        ):
            i = int(guard.sub.name[4:])
            slot, dim, guard_atom = view.inner, i, guard.sub
        else:
            return None
        if guard_atom.args != (Term(var),):
            return None
        if not 1 <= i <= d or not _slot_atoms_ok(payload, var, dim):
            return None
        slot.setdefault(i, []).append(payload)
    return view


# -- the localizer ----------------------------------------------------------------


class _Localizer:
    def __init__(self, sig: Signature, guessed: Sequence[tuple[str, int]], var: str):
        self.sig = sig
        self.var = var
        self.guessed: list[tuple[str, int]] = list(guessed)
        self.at_min: dict[int, list[Formula]] = {}
        self.at_max: dict[int, list[Formula]] = {}
        self.inner: dict[int, list[Formula]] = {}
        self._names = {name for name, _ in guessed} | set(sig.relation_arities())
        self._shift_cache: dict[tuple[str, tuple[int, ...]], str] = {}
        self._reified: dict[str, str] = {}

    def _fresh(self, name: str) -> str:
        if name in self._names:
            raise FragmentError(f"generated symbol {name!r} collides; rename your symbols")
        self._names.add(name)
        self.guessed.append((name, 1))
        return name

    def x(self) -> Term:
        return Term(self.var)

    def reify_extremal(self, name: str) -> str:
        """A guessed monadic symbol forced to equal min_i or max_i."""
        if name in self._reified:
            return self._reified[name]
        i = int(name[4:])
        fresh = self._fresh(f"e:{name}")
        x = self.x()
        if name.startswith("min_"):
            self.at_min.setdefault(i, []).append(Rel(fresh, (x,)))
            self.inner.setdefault(i, []).append(Not(Rel(fresh, (x.shifted(i),))))
        else:
            self.at_max.setdefault(i, []).append(Rel(fresh, (x,)))
            self.inner.setdefault(i, []).append(Not(Rel(fresh, (x,))))
        self._reified[name] = fresh
        return fresh

    def shifted_symbol(self, base: str, sucs: tuple[int, ...]) -> str:
        """A symbol forced to equal `base` read through the cyclic shift `sucs`."""
        if not sucs:
            return base
        key = (base, sucs)
        if key in self._shift_cache:
            return self._shift_cache[key]
        prev = self.shifted_symbol(base, sucs[:-1])
        i = sucs[-1]
        tag = ".".join(map(str, sucs))
        out = self._fresh(f"sh:{tag}:{base}")
        carrier = self._fresh(f"cr:{tag}:{base}")
        x = self.x()
        # out(x) <-> prev(suc_i x) cyclically: direct below max_i, carried
        # around the wrap through the row-min value of prev.
        self.inner.setdefault(i, []).append(Iff(Rel(out, (x,)), Rel(prev, (x.shifted(i),))))
        self.at_min.setdefault(i, []).append(Iff(Rel(carrier, (x,)), Rel(prev, (x,))))
        self.inner.setdefault(i, []).append(
            Iff(Rel(carrier, (x.shifted(i),)), Rel(carrier, (x,)))
        )
        self.at_max.setdefault(i, []).append(Iff(Rel(out, (x,)), Rel(carrier, (x,))))
        self._shift_cache[key] = out
        return out


def localize_pixel_sentence(
    s: EsoSentence, depth_cap: int = DEFAULT_SHIFT_DEPTH_CAP
) -> EsoSentence:
    """Rewrite a monadic one-variable pixel sentence into localized form."""
    if s.signature.kind != "pixel":
        raise FragmentError("localization applies to pixel signatures")
    existing = as_localized(s)
    if existing is not None:
        return s
    prefix, matrix = strip_universal_prefix(s.body)
    if len(prefix) != 1 or not is_quantifier_free(matrix):
        raise FragmentError("localization needs a prenex single-universal-variable body")
    if any(arity != 1 for _, arity in s.guessed):
        raise FragmentError("localization needs monadic guessed symbols")
    var = prefix[0]
    loc = _Localizer(s.signature, s.guessed, var)

    def rewrite(atom) -> Formula:
        if not isinstance(atom, Rel):
            raise FragmentError("pixel sentences have no order or equality atoms")
        (t,) = atom.args
        if t.var != var:
            raise FragmentError(f"unexpected variable {t.var!r}")
        if len(t.sucs) > depth_cap:
            raise FragmentError(
                f"successor depth {len(t.sucs)} exceeds the configured cap {depth_cap}"
            )
        base = atom.name
        if base.startswith(("min_", "max_")):
            base = loc.reify_extremal(base)
        return Rel(loc.shifted_symbol(base, t.sucs), (Term(var),))

    core = map_atoms(matrix, rewrite)
    loc.at_max.setdefault(1, []).append(core)
    loc.inner.setdefault(1, []).append(core)
    view = LocalizedView(s.signature, tuple(loc.guessed), var, loc.at_min, loc.at_max, loc.inner)
    return view.to_sentence()


# -- cardinality sentences ---------------------------------------------------------


@dataclass(frozen=True)
class Threshold:
    """There exist at least `k` elements x with psi(x); psi quantifier-free,
    single variable `var`."""

    psi: Formula
    k: int
    var: str = "x"


@dataclass(frozen=True)
class CNot:
    sub: "CardinalityNode"


@dataclass(frozen=True)
class CAnd:
    subs: tuple["CardinalityNode", ...]


@dataclass(frozen=True)
class COr:
    subs: tuple["CardinalityNode", ...]


CardinalityNode = Threshold | CNot | CAnd | COr


@dataclass(frozen=True)
class CardinalitySentence:
    signature: Signature
    root: CardinalityNode


def _thresholds(node: CardinalityNode) -> list[Threshold]:
    if isinstance(node, Threshold):
        return [node]
    if isinstance(node, CNot):
        return _thresholds(node.sub)
    out: list[Threshold] = []
    for sub in node.subs:
        out.extend(_thresholds(sub))
    return out


def count_satisfying(S, psi: Formula, var: str) -> int:
    """Direct-count oracle for threshold truth on a structure."""
    from .modelcheck import eval_fo

    return sum(1 for v in range(1, S.size + 1) if eval_fo(S, psi, {var: v}))


def eval_cardinality(S, c: CardinalitySentence) -> bool:
    def walk(node: CardinalityNode) -> bool:
        if isinstance(node, Threshold):
            return count_satisfying(S, node.psi, node.var) >= node.k
        if isinstance(node, CNot):
            return not walk(node.sub)
        if isinstance(node, CAnd):
            return all(walk(s) for s in node.subs)
        return any(walk(s) for s in node.subs)

    return walk(c.root)


def cardinality_to_monadic(
    c: CardinalitySentence, threshold_cap: int = DEFAULT_THRESHOLD_CAP
) -> EsoSentence:
    """Compile threshold counting into monadic guessed relations along the
    lexicographic traversal of the pixel domain."""
    sig = c.signature
    if sig.kind != "pixel":
        raise FragmentError("cardinality translation targets pixel signatures")
    d = sig.d
    var = "x"
    x = Term(var)
    min_lex = land([Rel(f"min_{i}", (x,)) for i in range(1, d + 1)])
    max_lex = land([Rel(f"max_{i}", (x,)) for i in range(1, d + 1)])

    def suclex_guard(i: int) -> Formula:
        parts: list[Formula] = [Not(Rel(f"max_{i}", (x,)))]
        parts.extend(Rel(f"max_{j}", (x,)) for j in range(i + 1, d + 1))
        return land(parts)

    def suclex_term(i: int) -> Term:
        return Term(var, tuple(range(i, d + 1)))

    guessed: list[tuple[str, int]] = []
    clauses: list[Formula] = []
    leaves = _thresholds(c.root)
    leaf_symbol: dict[int, str] = {}
    for idx, leaf in enumerate(leaves):
        if leaf.k < 1:
            raise ContractViolation("thresholds start at 1")
        if leaf.k > threshold_cap:
            raise CapExceeded(f"threshold {leaf.k} exceeds the cap {threshold_cap}")
        psi = rename_vars(leaf.psi, {leaf.var: var})
        k = leaf.k
        eq = [f"cnt{idx}:eq{j}" for j in range(k)]
        ge = f"cnt{idx}:ge{k}"
        leaf_symbol[idx] = ge
        guessed.extend((name, 1) for name in eq)
        guessed.append((ge, 1))

        def tag(j: int) -> str:
            return eq[j] if j < k else ge

        def at(sym: str, t: Term) -> Formula:
            return Rel(sym, (t,))

        # (1) pairwise disjointness of the counter predicates
        for a, b in itertools.combinations(range(k), 2):
            clauses.append(lor([Not(at(eq[a], x)), Not(at(eq[b], x))]))
        for a in range(k):
            clauses.append(lor([Not(at(eq[a], x)), Not(at(ge, x))]))
        # (2)-(3) initialization at the lexicographic minimum
        clauses.append(Implies(land([min_lex, Not(psi)]), at(eq[0], x)))
        clauses.append(Implies(land([min_lex, psi]), at(tag(1), x)))
        # (4)-(7) propagation along the lexicographic successor
        for i in range(1, d + 1):
            guard = suclex_guard(i)
            nxt = suclex_term(i)
            psi_next = subst_terms(psi, {var: nxt})
            for j in range(k):
                clauses.append(
                    Implies(land([guard, at(eq[j], x), Not(psi_next)]), at(eq[j], nxt))
                )
            for j in range(k - 1):
                clauses.append(
                    Implies(land([guard, at(eq[j], x), psi_next]), at(tag(j + 1), nxt))
                )
            clauses.append(
                Implies(land([guard, at(eq[k - 1], x), psi_next]), at(ge, nxt))
            )
            clauses.append(Implies(land([guard, at(ge, x)]), at(ge, nxt)))

    def boolean(node: CardinalityNode) -> Formula:
        if isinstance(node, Threshold):
            return Rel(leaf_symbol[leaves.index(node)], (x,))
        if isinstance(node, CNot):
            return Not(boolean(node.sub))
        if isinstance(node, CAnd):
            return And(tuple(boolean(s) for s in node.subs))
        return Or(tuple(boolean(s) for s in node.subs))

    clauses.append(Implies(max_lex, boolean(c.root)))
    return EsoSentence(sig, tuple(guessed), ForAll((var,), And(tuple(clauses))))


# -- Skolemization to a universal prefix ----------------------------------------------


def skolemize_universal(s: EsoSentence, d: int | None = None) -> EsoSentence:
    """Rewrite to a prenex universal prefix of length d without adding
    first-order variables; inner quantified subformulas become defined guessed
    relations, existentials become prefix-or witness relations."""
    if s.signature.kind != "coordinate":
        raise FragmentError("this Skolemization works on coordinate signatures")
    from .logic import _collect_vars

    used = sorted(_collect_vars(s.body))
    if d is None:
        d = max(len(used), 1)
    if len(used) > d:
        raise FragmentError(f"body uses {len(used)} variables, more than d={d}")

    names = set(used) | {name for name, _ in s.guessed} | set(s.signature.relation_arities())
    counter = itertools.count()

    def fresh(prefix: str) -> str:
        while True:
            name = f"{prefix}{next(counter)}"
            if name not in names:
                names.add(name)
                return name

    new_guessed: list[tuple[str, int]] = list(s.guessed)
    # conjuncts: (variables, quantifier-free matrix) to be folded under the prefix
    conjuncts: list[tuple[tuple[str, ...], Formula]] = []

    def expand(f: Formula) -> Formula:
        if isinstance(f, (ForAll, Exists)) and len(f.vars) > 1:
            inner: Formula = f.body
            cls = type(f)
            for v in reversed(f.vars):
                inner = cls((v,), inner)
            return inner
        return f

    def witness_clauses(
        guard: Formula | None, g_args: tuple[str, ...], z: str, theta: Formula
    ) -> None:
        """guard -> exists z theta, via the prefix-or relation of theta."""
        w = fresh("W")
        new_guessed.append((w, len(g_args) + 1))
        zt = Term(z)
        wargs = tuple(Term(a) for a in g_args) + (zt,)
        wargs_suc = tuple(Term(a) for a in g_args) + (zt.shifted(0),)
        theta_suc = subst_terms(theta, {z: zt.shifted(0)})
        allv = g_args + (z,)
        conjuncts.append(
            (allv, Implies(Rel("min", (zt,)), Iff(Rel(w, wargs), theta)))
        )
        conjuncts.append(
            (
                allv,
                Implies(
                    Not(Rel("max", (zt,))),
                    Iff(Rel(w, wargs_suc), Or((theta_suc, Rel(w, wargs)))),
                ),
            )
        )
        use = Rel(w, wargs) if guard is None else Implies(guard, Rel(w, wargs))
        conjuncts.append((allv, Implies(Rel("max", (zt,)), use)))

    def walk(f: Formula) -> Formula:
        f = expand(f)
        if isinstance(f, (Rel, Eq, Less)):
            return f
        if isinstance(f, Not):
            return Not(walk(f.sub))
        if isinstance(f, And):
            return And(tuple(walk(x) for x in f.subs))
        if isinstance(f, Or):
            return Or(tuple(walk(x) for x in f.subs))
        if isinstance(f, Implies):
            return Implies(walk(f.left), walk(f.right))
        if isinstance(f, Iff):
            return Iff(walk(f.left), walk(f.right))
        if isinstance(f, Xor):
            return Xor(walk(f.left), walk(f.right))
        if isinstance(f, (ForAll, Exists)):
            matrix = walk(f.body)
            z = f.vars[0]
            free = tuple(sorted(free_vars(matrix) - {z}))
            if len(free) + 1 > d:
                raise FragmentError("quantified subformula has too many free variables")
            p = fresh("D")
            new_guessed.append((p, len(free)))
            p_atom = Rel(p, tuple(Term(v) for v in free))
            allv = free + (z,)
            if isinstance(f, ForAll):
                # P -> forall z matrix; not P -> exists z not matrix
                conjuncts.append((allv, Implies(p_atom, matrix)))
                witness_clauses(Not(p_atom), free, z, Not(matrix))
            else:
                # exists z matrix -> P; P -> exists z matrix
                conjuncts.append((allv, Implies(matrix, p_atom)))
                witness_clauses(p_atom, free, z, matrix)
            return p_atom
        raise FragmentError(f"unknown formula node {f!r}")  # pragma: no cover

    top = walk(s.body)
    conjuncts.append((tuple(sorted(free_vars(top))), top))

    prefix = []
    for i in range(1, d + 1):
        prefix.append(fresh("u") if f"x{i}" in names else f"x{i}")
        names.add(prefix[-1])
    matrices = []
    for vars_, matrix in conjuncts:
        mapping = {v: prefix[i] for i, v in enumerate(vars_)}
        matrices.append(rename_vars(matrix, mapping))
    body = ForAll(tuple(prefix), And(tuple(matrices)))
    return EsoSentence(s.signature, tuple(new_guessed), body)


# -- arity reduction --------------------------------------------------------------------


def _term_name(t: Term) -> str:
    return "s" * len(t.sucs) + t.var


def _apply_subst(t: Term, sub: dict[str, Term]) -> Term:
    base = sub[t.var]
    return Term(base.var, tuple(sorted(base.sucs + t.sucs)))


def reduce_arities(s: EsoSentence, suc_depth: int = 1) -> EsoSentence:
    """Replace guessed symbols of arity above the prefix length by one fresh
    prefix-arity symbol per argument-term tuple, tied together by agreement
    clauses over unifying substitutions."""
    prefix, matrix = strip_universal_prefix(s.body)
    d = len(prefix)
    if not prefix or not is_quantifier_free(matrix):
        raise FragmentError("arity reduction needs a prenex universal sentence")
    wide = {name: arity for name, arity in s.guessed if arity > d}
    if not wide:
        return s

    occurrences: dict[str, list[tuple[Term, ...]]] = {name: [] for name in wide}
    for atom in atoms_of(matrix):
        if isinstance(atom, Rel) and atom.name in wide:
            if atom.args not in occurrences[atom.name]:
                occurrences[atom.name].append(atom.args)

    def symbol_for(name: str, args: tuple[Term, ...]) -> str:
        return f"{name}[{','.join(_term_name(t) for t in args)}]"

    prefix_terms = tuple(Term(v) for v in prefix)

    def replace(atom) -> Formula:
        if isinstance(atom, Rel) and atom.name in wide:
            return Rel(symbol_for(atom.name, atom.args), prefix_terms)
        return atom

    new_matrix = map_atoms(matrix, replace)
    new_guessed = [(n, a) for n, a in s.guessed if n not in wide]
    for name, tuples in occurrences.items():
        for args in tuples:
            new_guessed.append((symbol_for(name, args), d))

    # agreement clauses: whenever two argument tuples coincide under variable
    # substitutions (variables to variables-with-successor-chains), the fresh
    # symbols must agree on the substituted prefix.
    subs_pool = [
        Term(v, (0,) * k) for v in prefix for k in range(suc_depth + 1)
    ]
    agreements: set[tuple[str, tuple[Term, ...], str, tuple[Term, ...]]] = set()
    clauses: list[Formula] = [new_matrix]
    for name, tuples in occurrences.items():
        for t1, t2 in itertools.product(tuples, repeat=2):
            for sub1_vals in itertools.product(subs_pool, repeat=d):
                sub1 = dict(zip(prefix, sub1_vals))
                img1 = tuple(_apply_subst(t, sub1) for t in t1)
                for sub2_vals in itertools.product(subs_pool, repeat=d):
                    sub2 = dict(zip(prefix, sub2_vals))
                    if (t1, sub1_vals) == (t2, sub2_vals):
                        continue
                    img2 = tuple(_apply_subst(t, sub2) for t in t2)
                    if img1 != img2:
                        continue
                    key = (
                        symbol_for(name, t1),
                        sub1_vals,
                        symbol_for(name, t2),
                        sub2_vals,
                    )
                    rkey = (key[2], key[3], key[0], key[1])
                    if key in agreements or rkey in agreements:
                        continue
                    agreements.add(key)
                    clauses.append(
                        Iff(
                            Rel(key[0], sub1_vals),
                            Rel(key[2], sub2_vals),
                        )
                    )
    body = ForAll(prefix, And(tuple(clauses)))
    return EsoSentence(s.signature, tuple(new_guessed), body)
