"""Abstract and concrete syntax for relational ESO sentences over picture signatures.

Terms are a base variable with a chain of successor applications: ``suc_i``
(one per dimension) on pixel signatures, the single ``suc`` (stored as index
0) on coordinate signatures.  Atoms are relation applications plus equality
and strict order, the latter two only on coordinate signatures.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence, Union

from .errors import FragmentError, ParseError

COORD_SUC = 0  # successor index used on coordinate signatures


# -- terms and formulas -------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """A variable with successor applications; pixel chains are kept sorted
    (the suc_i commute), coordinate chains are all COORD_SUC so only the
    length matters."""

    var: str
    sucs: tuple[int, ...] = ()

    def shifted(self, index: int, count: int = 1) -> "Term":
        return Term(self.var, tuple(sorted(self.sucs + (index,) * count)))

    @property
    def depth(self) -> int:
        return len(self.sucs)


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Less:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    subs: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    subs: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Xor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    vars: tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    vars: tuple[str, ...]
    body: "Formula"


Atom = Union[Rel, Eq, Less]
Formula = Union[Rel, Eq, Less, Not, And, Or, Implies, Iff, Xor, ForAll, Exists]

TRUE: Formula = And(())
FALSE: Formula = Or(())


def land(subs: Sequence[Formula]) -> Formula:
    subs = tuple(subs)
    return subs[0] if len(subs) == 1 else And(subs)


def lor(subs: Sequence[Formula]) -> Formula:
    subs = tuple(subs)
    return subs[0] if len(subs) == 1 else Or(subs)


# -- signatures and sentences -------------------------------------------------


@dataclass(frozen=True)
class Signature:
    """Descriptor of the input vocabulary: encoding kind, picture dimension,
    input alphabet."""

    kind: str  # "pixel" or "coordinate"
    d: int
    alphabet: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("pixel", "coordinate"):
            raise FragmentError(f"unknown encoding kind {self.kind!r}")
        if self.d < 1:
            raise FragmentError("dimension must be positive")

    def relation_arities(self) -> dict[str, int]:
        out: dict[str, int] = {}
        if self.kind == "pixel":
            for s in self.alphabet:
                out[f"Q_{s}"] = 1
            for i in range(1, self.d + 1):
                out[f"min_{i}"] = 1
                out[f"max_{i}"] = 1
        else:
            for s in self.alphabet:
                out[f"Q_{s}"] = self.d
            out["min"] = 1
            out["max"] = 1
        return out

    def suc_indices(self) -> tuple[int, ...]:
        if self.kind == "pixel":
            return tuple(range(1, self.d + 1))
        return (COORD_SUC,)


@dataclass(frozen=True)
class EsoSentence:
    """Existentially quantified relation symbols over a first-order body."""

    signature: Signature
    guessed: tuple[tuple[str, int], ...]
    body: Formula

    def __post_init__(self) -> None:
        predefined = self.signature.relation_arities()
        seen: dict[str, int] = {}
        for name, arity in self.guessed:
            if name in predefined:
                raise FragmentError(f"guessed symbol {name!r} collides with the signature")
            if name in seen:
                raise FragmentError(f"guessed symbol {name!r} declared twice")
            if arity < 0:
                raise FragmentError(f"negative arity for {name!r}")
            seen[name] = arity
        _validate(self.body, self.signature, seen, frozenset())

    def guessed_arity(self, name: str) -> int:
        for g, a in self.guessed:
            if g == name:
                return a
        raise KeyError(name)

    def arity_of(self, name: str) -> int:
        table = self.signature.relation_arities()
        if name in table:
            return table[name]
        return self.guessed_arity(name)

    def is_guessed(self, name: str) -> bool:
        return any(g == name for g, _ in self.guessed)


def _validate(
    f: Formula, sig: Signature, guessed: dict[str, int], scope: frozenset[str]
) -> None:
    if isinstance(f, Rel):
        table = sig.relation_arities()
        if f.name in table:
            arity = table[f.name]
        elif f.name in guessed:
            arity = guessed[f.name]
        else:
            raise FragmentError(f"unknown relation symbol {f.name!r}")
        if len(f.args) != arity:
            raise FragmentError(
                f"arity mismatch: {f.name} expects {arity} arguments, got {len(f.args)}"
            )
        for t in f.args:
            _validate_term(t, sig, scope)
    elif isinstance(f, (Eq, Less)):
        if sig.kind != "coordinate":
            raise FragmentError("equality and order atoms exist only on coordinate signatures")
        _validate_term(f.left, sig, scope)
        _validate_term(f.right, sig, scope)
    elif isinstance(f, Not):
        _validate(f.sub, sig, guessed, scope)
    elif isinstance(f, (And, Or)):
        for s in f.subs:
            _validate(s, sig, guessed, scope)
    elif isinstance(f, (Implies, Iff, Xor)):
        _validate(f.left, sig, guessed, scope)
        _validate(f.right, sig, guessed, scope)
    elif isinstance(f, (ForAll, Exists)):
        _validate(f.body, sig, guessed, scope | set(f.vars))
    else:  # pragma: no cover
        raise FragmentError(f"unknown formula node {f!r}")


def _validate_term(t: Term, sig: Signature, scope: frozenset[str]) -> None:
    if t.var not in scope:
        raise FragmentError(f"unbound variable {t.var!r}")
    valid = set(sig.suc_indices())
    for i in t.sucs:
        if i not in valid:
            raise FragmentError(f"successor index {i} invalid for {sig.kind} signature")


# -- traversal helpers ---------------------------------------------------------


def map_atoms(f: Formula, fn: Callable[[Atom], Formula]) -> Formula:
    """Rebuild a formula, replacing every atom by fn(atom)."""
    if isinstance(f, (Rel, Eq, Less)):
        return fn(f)
    if isinstance(f, Not):
        return Not(map_atoms(f.sub, fn))
    if isinstance(f, And):
        return And(tuple(map_atoms(s, fn) for s in f.subs))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(s, fn) for s in f.subs))
    if isinstance(f, Implies):
        return Implies(map_atoms(f.left, fn), map_atoms(f.right, fn))
    if isinstance(f, Iff):
        return Iff(map_atoms(f.left, fn), map_atoms(f.right, fn))
    if isinstance(f, Xor):
        return Xor(map_atoms(f.left, fn), map_atoms(f.right, fn))
    if isinstance(f, ForAll):
        return ForAll(f.vars, map_atoms(f.body, fn))
    if isinstance(f, Exists):
        return Exists(f.vars, map_atoms(f.body, fn))
    raise FragmentError(f"unknown formula node {f!r}")  # pragma: no cover


def atoms_of(f: Formula) -> Iterator[Atom]:
    if isinstance(f, (Rel, Eq, Less)):
        yield f
    elif isinstance(f, Not):
        yield from atoms_of(f.sub)
    elif isinstance(f, (And, Or)):
        for s in f.subs:
            yield from atoms_of(s)
    elif isinstance(f, (Implies, Iff, Xor)):
        yield from atoms_of(f.left)
        yield from atoms_of(f.right)
    elif isinstance(f, (ForAll, Exists)):
        yield from atoms_of(f.body)


def rename_vars(f: Formula, mapping: dict[str, str]) -> Formula:
    """Rename free variables; bound variables shadow the mapping."""

    def walk(g: Formula, shadow: frozenset[str]) -> Formula:
        if isinstance(g, (Rel, Eq, Less)):

            def ren(t: Term) -> Term:
                if t.var in shadow or t.var not in mapping:
                    return t
                return Term(mapping[t.var], t.sucs)

            if isinstance(g, Rel):
                return Rel(g.name, tuple(ren(t) for t in g.args))
            if isinstance(g, Eq):
                return Eq(ren(g.left), ren(g.right))
            return Less(ren(g.left), ren(g.right))
        if isinstance(g, Not):
            return Not(walk(g.sub, shadow))
        if isinstance(g, And):
            return And(tuple(walk(s, shadow) for s in g.subs))
        if isinstance(g, Or):
            return Or(tuple(walk(s, shadow) for s in g.subs))
        if isinstance(g, Implies):
            return Implies(walk(g.left, shadow), walk(g.right, shadow))
        if isinstance(g, Iff):
            return Iff(walk(g.left, shadow), walk(g.right, shadow))
        if isinstance(g, Xor):
            return Xor(walk(g.left, shadow), walk(g.right, shadow))
        if isinstance(g, ForAll):
            return ForAll(g.vars, walk(g.body, shadow | set(g.vars)))
        if isinstance(g, Exists):
            return Exists(g.vars, walk(g.body, shadow | set(g.vars)))
        raise FragmentError(f"unknown formula node {g!r}")  # pragma: no cover

    return walk(f, frozenset())


def subst_terms(f: Formula, mapping: dict[str, Term]) -> Formula:
    """Substitute terms for free variables in a quantifier-free formula."""

    def sub(t: Term) -> Term:
        if t.var not in mapping:
            return t
        base = mapping[t.var]
        return Term(base.var, tuple(sorted(base.sucs + t.sucs)))

    def fn(a: Atom) -> Formula:
        if isinstance(a, Rel):
            return Rel(a.name, tuple(sub(t) for t in a.args))
        if isinstance(a, Eq):
            return Eq(sub(a.left), sub(a.right))
        return Less(sub(a.left), sub(a.right))

    return map_atoms(f, fn)


def free_vars(f: Formula) -> frozenset[str]:
    def walk(g: Formula, shadow: frozenset[str]) -> frozenset[str]:
        if isinstance(g, Rel):
            return frozenset(t.var for t in g.args if t.var not in shadow)
        if isinstance(g, (Eq, Less)):
            return frozenset(t.var for t in (g.left, g.right) if t.var not in shadow)
        if isinstance(g, Not):
            return walk(g.sub, shadow)
        if isinstance(g, (And, Or)):
            out: frozenset[str] = frozenset()
            for s in g.subs:
                out |= walk(s, shadow)
            return out
        if isinstance(g, (Implies, Iff, Xor)):
            return walk(g.left, shadow) | walk(g.right, shadow)
        if isinstance(g, (ForAll, Exists)):
            return walk(g.body, shadow | set(g.vars))
        raise FragmentError(f"unknown formula node {g!r}")  # pragma: no cover

    return walk(f, frozenset())


def strip_universal_prefix(f: Formula) -> tuple[tuple[str, ...], Formula]:
    """Peel nested leading universal quantifiers."""
    prefix: list[str] = []
    while isinstance(f, ForAll):
        prefix.extend(f.vars)
        f = f.body
    return tuple(prefix), f


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (ForAll, Exists)):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.sub)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(s) for s in f.subs)
    if isinstance(f, (Implies, Iff, Xor)):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return True


# -- concrete syntax -----------------------------------------------------------


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append((text[i:j], i))
            i = j
    return tokens


def _read_sexpr(tokens: list[tuple[str, int]], pos: int):
    if pos >= len(tokens):
        raise ParseError("unexpected end of input")
    tok, at = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise ParseError("unclosed parenthesis", at)
            if tokens[pos][0] == ")":
                return items, pos + 1
            item, pos = _read_sexpr(tokens, pos)
            items.append(item)
    if tok == ")":
        raise ParseError("unexpected ')'", at)
    return tok, pos + 1


_CONNECTIVES = {"forall", "exists", "and", "or", "not", "implies", "iff", "xor"}


def _parse_term(sx, sig: Signature) -> Term:
    if isinstance(sx, str):
        return Term(sx)
    if not sx or not isinstance(sx[0], str):
        raise ParseError(f"bad term {sx!r}")
    head = sx[0]
    if head == "suc":
        if sig.kind != "coordinate":
            raise ParseError("plain 'suc' is only valid on coordinate signatures")
        if len(sx) != 2:
            raise ParseError("'suc' takes one argument")
        return _parse_term(sx[1], sig).shifted(COORD_SUC)
    if head.startswith("suc_"):
        if sig.kind != "pixel":
            raise ParseError("'suc_i' is only valid on pixel signatures")
        try:
            idx = int(head[4:])
        except ValueError as exc:
            raise ParseError(f"bad successor {head!r}") from exc
        if len(sx) != 2:
            raise ParseError(f"{head!r} takes one argument")
        return _parse_term(sx[1], sig).shifted(idx)
    raise ParseError(f"bad term head {head!r}")


def _parse_formula(sx, sig: Signature) -> Formula:
    if isinstance(sx, str):
        raise ParseError(f"bare token {sx!r} is not a formula")
    if not sx:
        raise ParseError("empty list is not a formula")
    head = sx[0]
    if not isinstance(head, str):
        raise ParseError("formula head must be a symbol")
    if head == "forall" or head == "exists":
        if len(sx) != 3 or not isinstance(sx[1], list):
            raise ParseError(f"'{head}' takes a variable list and a body")
        vars_ = tuple(v for v in sx[1])
        if not all(isinstance(v, str) for v in vars_):
            raise ParseError("quantified variables must be symbols")
        body = _parse_formula(sx[2], sig)
        return ForAll(vars_, body) if head == "forall" else Exists(vars_, body)
    if head == "and":
        return And(tuple(_parse_formula(s, sig) for s in sx[1:]))
    if head == "or":
        return Or(tuple(_parse_formula(s, sig) for s in sx[1:]))
    if head == "not":
        if len(sx) != 2:
            raise ParseError("'not' takes one argument")
        return Not(_parse_formula(sx[1], sig))
    if head in ("implies", "iff", "xor"):
        if len(sx) != 3:
            raise ParseError(f"'{head}' takes two arguments")
        cls = {"implies": Implies, "iff": Iff, "xor": Xor}[head]
        return cls(_parse_formula(sx[1], sig), _parse_formula(sx[2], sig))
    if head == "=":
        if len(sx) != 3:
            raise ParseError("'=' takes two arguments")
        return Eq(_parse_term(sx[1], sig), _parse_term(sx[2], sig))
    if head == "<":
        if len(sx) != 3:
            raise ParseError("'<' takes two arguments")
        return Less(_parse_term(sx[1], sig), _parse_term(sx[2], sig))
    return Rel(head, tuple(_parse_term(s, sig) for s in sx[1:]))


def parse_sentence(text: str, signature: Signature) -> EsoSentence:
    """Parse a sentence in the documented s-expression grammar."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input")
    sx, pos = _read_sexpr(tokens, 0)
    if pos != len(tokens):
        raise ParseError("trailing input after sentence", tokens[pos][1])
    if isinstance(sx, list) and sx and sx[0] == "exists-rel":
        if len(sx) != 3 or not isinstance(sx[1], list):
            raise ParseError("'exists-rel' takes a declaration list and a body")
        guessed = []
        for decl in sx[1]:
            if not (isinstance(decl, list) and len(decl) == 2 and isinstance(decl[0], str)):
                raise ParseError(f"bad declaration {decl!r}")
            try:
                arity = int(decl[1])
            except (TypeError, ValueError) as exc:
                raise ParseError(f"bad arity in declaration {decl!r}") from exc
            guessed.append((decl[0], arity))
        body = _parse_formula(sx[2], signature)
        return EsoSentence(signature, tuple(guessed), body)
    body = _parse_formula(sx, signature)
    return EsoSentence(signature, (), body)


def render_term(t: Term, sig: Signature) -> str:
    out = t.var
    for i in t.sucs:
        out = f"(suc {out})" if i == COORD_SUC else f"(suc_{i} {out})"
    return out


def render_formula(f: Formula, sig: Signature) -> str:
    if isinstance(f, Rel):
        if not f.args:
            return f"({f.name})"
        return "(" + " ".join([f.name] + [render_term(t, sig) for t in f.args]) + ")"
    if isinstance(f, Eq):
        return f"(= {render_term(f.left, sig)} {render_term(f.right, sig)})"
    if isinstance(f, Less):
        return f"(< {render_term(f.left, sig)} {render_term(f.right, sig)})"
    if isinstance(f, Not):
        return f"(not {render_formula(f.sub, sig)})"
    if isinstance(f, And):
        return "(and" + "".join(" " + render_formula(s, sig) for s in f.subs) + ")"
    if isinstance(f, Or):
        return "(or" + "".join(" " + render_formula(s, sig) for s in f.subs) + ")"
    if isinstance(f, Implies):
        return f"(implies {render_formula(f.left, sig)} {render_formula(f.right, sig)})"
    if isinstance(f, Iff):
        return f"(iff {render_formula(f.left, sig)} {render_formula(f.right, sig)})"
    if isinstance(f, Xor):
        return f"(xor {render_formula(f.left, sig)} {render_formula(f.right, sig)})"
    if isinstance(f, ForAll):
        return f"(forall ({' '.join(f.vars)}) {render_formula(f.body, sig)})"
    if isinstance(f, Exists):
        return f"(exists ({' '.join(f.vars)}) {render_formula(f.body, sig)})"
    raise FragmentError(f"unknown formula node {f!r}")  # pragma: no cover


def render_sentence(s: EsoSentence) -> str:
    body = render_formula(s.body, s.signature)
    if not s.guessed:
        return body
    decls = " ".join(f"({name} {arity})" for name, arity in s.guessed)
    return f"(exists-rel ({decls}) {body})"


# -- fragment classification ----------------------------------------------------


@dataclass(frozen=True)
class FragmentDescriptor:
    variables: int
    prenex_universal: bool
    prefix_length: int
    max_guessed_arity: int
    sorted: bool


def _collect_vars(f: Formula) -> set[str]:
    out: set[str] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Rel):
            out.update(t.var for t in g.args)
        elif isinstance(g, (Eq, Less)):
            out.update((g.left.var, g.right.var))
        elif isinstance(g, Not):
            walk(g.sub)
        elif isinstance(g, (And, Or)):
            for s in g.subs:
                walk(s)
        elif isinstance(g, (Implies, Iff, Xor)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (ForAll, Exists)):
            out.update(g.vars)
            walk(g.body)

    walk(f)
    return out


def classify_fragment(s: EsoSentence) -> FragmentDescriptor:
    """Report variable count, universal-prenex shape, and guessed arities."""
    variables = len(_collect_vars(s.body))
    prefix, matrix = strip_universal_prefix(s.body)
    prenex = bool(prefix) and is_quantifier_free(matrix) and len(set(prefix)) == len(prefix)
    max_arity = max((a for _, a in s.guessed), default=0)
    sorted_flag = False
    if s.signature.kind == "coordinate" and prenex:
        try:
            sorted_flag = is_sorted(s)
        except FragmentError:
            sorted_flag = False
    return FragmentDescriptor(
        variables=variables,
        prenex_universal=prenex,
        prefix_length=len(prefix) if prenex else 0,
        max_guessed_arity=max_arity,
        sorted=sorted_flag,
    )


def is_sorted(s: EsoSentence, k: int | None = None, d: int | None = None) -> bool:
    """Check the coordinate normal form: prenex universal over x1..xd, guessed
    symbols of arity exactly d, and atoms restricted to Q_s(x1..xk), R(x),
    R(x with one successor), min(xi), max(xi)."""
    if s.signature.kind != "coordinate":
        raise FragmentError("sortedness is defined on coordinate signatures")
    if k is None:
        k = s.signature.d
    prefix, matrix = strip_universal_prefix(s.body)
    if d is None:
        d = len(prefix)
    if len(prefix) != d or len(set(prefix)) != d or not is_quantifier_free(matrix):
        return False
    if k > d:
        return False
    order = {v: i + 1 for i, v in enumerate(prefix)}
    if any(arity != d for _, arity in s.guessed):
        return False
    guessed = {name for name, _ in s.guessed}

    def plain_prefix(args: tuple[Term, ...], upto: int) -> bool:
        if len(args) != upto:
            return False
        return all(t.sucs == () and order.get(t.var) == i + 1 for i, t in enumerate(args))

    for atom in atoms_of(matrix):
        if isinstance(atom, (Eq, Less)):
            return False
        name = atom.name
        if name in ("min", "max"):
            t = atom.args[0]
            if t.sucs != () or t.var not in order:
                return False
        elif name.startswith("Q_") and not s.is_guessed(name):
            if not plain_prefix(atom.args, k):
                return False
        elif name in guessed:
            args = atom.args
            if len(args) != d:
                return False
            if any(order.get(t.var) != i + 1 for i, t in enumerate(args)):
                return False
            depths = [t.depth for t in args]
            if sum(depths) > 1 or any(dep > 1 for dep in depths):
                return False
        else:
            return False
    return True
