"""Formulas of the relational language {in, =}.

Bound variables are de Bruijn indices (``Bound(0)`` is the innermost binder);
free variables are named parameters.  Binders remember the surface name they
were parsed with, but that hint takes no part in equality.

Surface grammar, loosest binding first::

    iff   := imp ('<->' imp)*          left-assoc
    imp   := or ('->' imp)?            right-assoc
    or    := and ('\\/' and)*
    and   := unary ('/\\' unary)*
    unary := '~' unary | quant | atom | '(' iff ')'
    quant := ('forall' | 'exists') IDENT ['in' IDENT] '.' iff
    atom  := 'true' | 'false' | IDENT '=' IDENT | IDENT 'in' IDENT
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Union


# -- terms ---------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    index: int


@dataclass(frozen=True)
class Free:
    name: str


Term = Union[Bound, Free]


# -- formulas ------------------------------------------------------------


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Equal(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Member(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    body: Formula
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Exists(Formula):
    body: Formula
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class BoundedForall(Formula):
    # ``bound`` is resolved outside the binder
    bound: Term
    body: Formula
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class BoundedExists(Formula):
    bound: Term
    body: Formula
    name: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Hole(Formula):
    """Predicate placeholder inside a scheme template."""

    args: tuple


TOP = Top()
BOTTOM = Bottom()

BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists, BoundedForall, BoundedExists)
ATOMS = (Equal, Member)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class ArityError(ValueError):
    pass


# -- traversal helpers ---------------------------------------------------


def _terms_map(f: Formula, fn, depth: int = 0) -> Formula:
    """Rebuild ``f`` with every term replaced by ``fn(term, depth)``."""
    if isinstance(f, ATOMS):
        return type(f)(fn(f.left, depth), fn(f.right, depth))
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_terms_map(f.body, fn, depth))
    if isinstance(f, BINARY):
        return type(f)(_terms_map(f.left, fn, depth), _terms_map(f.right, fn, depth))
    if isinstance(f, (Forall, Exists)):
        return type(f)(_terms_map(f.body, fn, depth + 1), f.name)
    if isinstance(f, (BoundedForall, BoundedExists)):
        return type(f)(fn(f.bound, depth), _terms_map(f.body, fn, depth + 1), f.name)
    if isinstance(f, Hole):
        return Hole(tuple(fn(t, depth) for t in f.args))
    raise TypeError(f"not a formula: {f!r}")


def _terms(f: Formula, depth: int = 0):
    """Yield ``(term, depth)`` for every term occurrence, left to right."""
    if isinstance(f, ATOMS):
        yield f.left, depth
        yield f.right, depth
    elif isinstance(f, Not):
        yield from _terms(f.body, depth)
    elif isinstance(f, BINARY):
        yield from _terms(f.left, depth)
        yield from _terms(f.right, depth)
    elif isinstance(f, (Forall, Exists)):
        yield from _terms(f.body, depth + 1)
    elif isinstance(f, (BoundedForall, BoundedExists)):
        yield f.bound, depth
        yield from _terms(f.body, depth + 1)
    elif isinstance(f, Hole):
        for t in f.args:
            yield t, depth


def free_vars(f: Formula) -> tuple[str, ...]:
    """Free variable names in order of first occurrence."""
    seen: dict[str, None] = {}
    for t, _ in _terms(f):
        if isinstance(t, Free):
            seen.setdefault(t.name)
    return tuple(seen)


def is_closed(f: Formula) -> bool:
    return not free_vars(f) and all(
        not isinstance(t, Bound) or t.index < d for t, d in _terms(f)
    )


def well_scoped(f: Formula) -> bool:
    return all(not isinstance(t, Bound) or t.index < d for t, d in _terms(f))


def shift(f: Formula, amount: int, cutoff: int = 0) -> Formula:
    """Add ``amount`` to every bound index that escapes ``cutoff`` binders."""

    def fn(t, depth):
        if isinstance(t, Bound) and t.index >= cutoff + depth:
            return Bound(t.index + amount)
        return t

    return _terms_map(f, fn)


def rename_free(f: Formula, mapping: dict[str, str]) -> Formula:
    return _terms_map(
        f, lambda t, d: Free(mapping[t.name]) if isinstance(t, Free) and t.name in mapping else t
    )


def abstract(f: Formula, name: str) -> Formula:
    """Turn free ``name`` into ``Bound(0)`` of a binder about to wrap ``f``."""

    def fn(t, depth):
        if isinstance(t, Bound) and t.index >= depth:
            return Bound(t.index + 1)
        if isinstance(t, Free) and t.name == name:
            return Bound(depth)
        return t

    return _terms_map(f, fn)


def forall(name: str, body: Formula) -> Formula:
    return Forall(abstract(body, name), name)


def exists(name: str, body: Formula) -> Formula:
    return Exists(abstract(body, name), name)


def instantiate(f: Formula, term: Term) -> Formula:
    """Body of a binder with ``Bound(0)`` replaced by the outer-scope ``term``."""

    def fn(t, depth):
        if isinstance(t, Bound):
            if t.index == depth:
                return Bound(term.index + depth) if isinstance(term, Bound) else term
            if t.index > depth:
                return Bound(t.index - 1)
        return t

    return _terms_map(f, fn)


def universal_closure(f: Formula) -> Formula:
    for name in reversed(free_vars(f)):
        f = forall(name, f)
    return f


def desugar(f: Formula) -> Formula:
    """Replace bounded quantifiers by their guarded unbounded forms."""
    if isinstance(f, (Top, Bottom, Equal, Member, Hole)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, BINARY):
        return type(f)(desugar(f.left), desugar(f.right))
    if isinstance(f, (Forall, Exists)):
        return type(f)(desugar(f.body), f.name)
    guard = Member(Bound(0), _shift_term(f.bound, 1))
    body = desugar(f.body)
    if isinstance(f, BoundedForall):
        return Forall(Implies(guard, body), f.name)
    return Exists(And(guard, body), f.name)


def _shift_term(t: Term, amount: int) -> Term:
    return Bound(t.index + amount) if isinstance(t, Bound) else t


def _mentions_bound(f: Formula, index: int) -> bool:
    return any(isinstance(t, Bound) and t.index == index + d for t, d in _terms(f))


def resugar(f: Formula) -> Formula:
    """Inverse of :func:`desugar` on guarded quantifiers."""
    if isinstance(f, (Top, Bottom, Equal, Member, Hole)):
        return f
    if isinstance(f, Not):
        return Not(resugar(f.body))
    if isinstance(f, BINARY):
        return type(f)(resugar(f.left), resugar(f.right))
    if isinstance(f, (BoundedForall, BoundedExists)):
        return type(f)(f.bound, resugar(f.body), f.name)
    inner, guarded = f.body, Implies if isinstance(f, Forall) else And
    if (
        isinstance(inner, guarded)
        and isinstance(inner.left, Member)
        and inner.left.left == Bound(0)
        and inner.left.right != Bound(0)
    ):
        b = inner.left.right
        bound = Bound(b.index - 1) if isinstance(b, Bound) else b
        node = BoundedForall if isinstance(f, Forall) else BoundedExists
        return node(bound, resugar(inner.right), f.name)
    return type(f)(resugar(f.body), f.name)


def is_delta0(f: Formula) -> bool:
    """True iff every quantifier in ``f`` is bounded."""
    if isinstance(f, (Forall, Exists)):
        return False
    if isinstance(f, (BoundedForall, BoundedExists)):
        return is_delta0(f.body)
    if isinstance(f, Not):
        return is_delta0(f.body)
    if isinstance(f, BINARY):
        return is_delta0(f.left) and is_delta0(f.right)
    return True


def size(f: Formula) -> int:
    if isinstance(f, Not):
        return 1 + size(f.body)
    if isinstance(f, BINARY):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, QUANTIFIERS):
        return 1 + size(f.body)
    return 1


# -- tokenizer / parser --------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<op><->|->|/\\|\\/|[~().=,])|(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)"
)
KEYWORDS = {"forall", "exists", "in", "true", "false"}
IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks, pos, line, col = [], 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        s = m.group()
        if m.lastgroup != "ws":
            kind = "kw" if m.lastgroup == "ident" and s in KEYWORDS else m.lastgroup
            toks.append(_Tok(kind, s, line, col))
        for ch in s:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str, params, hole: str | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.params = None if params is None else set(params)
        self.hole = hole
        self.scope: list[str] = []

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise FormulaSyntaxError(f"{msg}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.peek().text != text or self.peek().kind == "ident":
            self.fail(f"expected {text!r}")
        return self.next()

    def ident(self) -> _Tok:
        if self.peek().kind != "ident":
            self.fail("expected identifier")
        return self.next()

    def term(self, tok: _Tok) -> Term:
        name = tok.text
        for depth, bound in enumerate(reversed(self.scope)):
            if bound == name:
                return Bound(depth)
        if self.params is not None and name not in self.params:
            raise FormulaSyntaxError(f"unbound variable {name!r}", tok.line, tok.col)
        return Free(name)

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek().kind != "eof":
            self.fail("expected end of input")
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek().text == "<->":
            self.next()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek().text == "->":
            self.next()
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().text == "\\/":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().text == "/\\":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "~":
            self.next()
            return Not(self.unary())
        if tok.kind == "kw" and tok.text in ("forall", "exists"):
            return self.quant()
        if tok.text == "(":
            self.next()
            f = self.iff()
            self.expect(")")
            return f
        if tok.kind == "kw" and tok.text == "true":
            self.next()
            return TOP
        if tok.kind == "kw" and tok.text == "false":
            self.next()
            return BOTTOM
        if tok.kind == "ident":
            return self.atom()
        self.fail("expected formula")

    def quant(self) -> Formula:
        which = self.next().text
        name = self.ident().text
        bound = None
        if self.peek().kind == "kw" and self.peek().text == "in":
            self.next()
            bound = self.term(self.ident())
        self.expect(".")
        self.scope.append(name)
        body = self.iff()
        self.scope.pop()
        if bound is None:
            return (Forall if which == "forall" else Exists)(body, name)
        return (BoundedForall if which == "forall" else BoundedExists)(bound, body, name)

    def atom(self) -> Formula:
        left = self.ident()
        if self.hole is not None and left.text == self.hole and self.peek().text == "(":
            self.next()
            args = [self.term(self.ident())]
            while self.peek().text == ",":
                self.next()
                args.append(self.term(self.ident()))
            self.expect(")")
            return Hole(tuple(args))
        op = self.peek()
        if op.text == "=":
            self.next()
            return Equal(self.term(left), self.term(self.ident()))
        if op.kind == "kw" and op.text == "in":
            self.next()
            return Member(self.term(left), self.term(self.ident()))
        self.fail("expected '=' or 'in'")


def parse(text: str, params: Iterable[str] | None = None) -> Formula:
    """Parse surface syntax.

    With ``params=None`` every unbound name becomes a free parameter; with an
    explicit collection, names outside it are rejected.
    """
    return _Parser(text, params, None).parse()


# -- printer -------------------------------------------------------------


def _fresh(base: str, taken: set[str]) -> str:
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def _used_names(f: Formula, ctx: list[str]) -> set[str]:
    """Names that occurrences inside ``f`` resolve to, given outer binder names."""
    used = set()
    for t, d in _terms(f):
        if isinstance(t, Free):
            used.add(t.name)
        elif t.index >= d and t.index - d < len(ctx):
            used.add(ctx[len(ctx) - 1 - (t.index - d)])
    return used


def to_text(f: Formula) -> str:
    """Print with enough parentheses that :func:`parse` gives back ``f``."""
    return _Printer().show(f, [])


class _Printer:
    def term(self, t: Term, ctx: list[str]) -> str:
        if isinstance(t, Free):
            return t.name
        if t.index >= len(ctx):
            return f"#{t.index - len(ctx)}"
        return ctx[len(ctx) - 1 - t.index]

    def binder(self, f, ctx: list[str]) -> str:
        name = f.name if f.name and IDENT.fullmatch(f.name) and f.name not in KEYWORDS else "x"
        clash = _used_names(f.body, ctx + ["\0"])
        if name in clash:
            name = _fresh(name, clash | set(ctx))
        return name

    def operand(self, f: Formula, ctx: list[str]) -> str:
        s = self.show(f, ctx)
        return f"({s})" if isinstance(f, BINARY + QUANTIFIERS) else s

    def show(self, f: Formula, ctx: list[str]) -> str:
        if isinstance(f, Top):
            return "true"
        if isinstance(f, Bottom):
            return "false"
        if isinstance(f, Equal):
            return f"{self.term(f.left, ctx)} = {self.term(f.right, ctx)}"
        if isinstance(f, Member):
            return f"{self.term(f.left, ctx)} in {self.term(f.right, ctx)}"
        if isinstance(f, Hole):
            return "C(" + ", ".join(self.term(t, ctx) for t in f.args) + ")"
        if isinstance(f, Not):
            inner = self.show(f.body, ctx)
            if not isinstance(f.body, (Top, Bottom, Not)):
                inner = f"({inner})"
            return "~" + inner
        if isinstance(f, BINARY):
            op = {And: "/\\", Or: "\\/", Implies: "->", Iff: "<->"}[type(f)]
            return f"{self.operand(f.left, ctx)} {op} {self.operand(f.right, ctx)}"
        name = self.binder(f, ctx)
        word = "forall" if isinstance(f, (Forall, BoundedForall)) else "exists"
        head = f"{word} {name}"
        if isinstance(f, (BoundedForall, BoundedExists)):
            head += f" in {self.term(f.bound, ctx)}"
        body = self.show(f.body, ctx + [name])
        if isinstance(f.body, BINARY):
            body = f"({body})"
        return f"{head}. {body}"


# -- scheme templates ----------------------------------------------------


@dataclass(frozen=True)
class SchemeTemplate:
    """A formula with a predicate hole ``C(...)`` over ``hole_vars``.

    Plugs must mention every hole variable free; any other free names in a
    plug are parameters and stay free in the instance.
    """

    name: str
    hole_vars: tuple[str, ...]
    body: Formula
    delta0_only: bool = False

    @property
    def arity(self) -> int:
        return len(self.hole_vars)


def parse_template(
    name: str, text: str, hole_vars: tuple[str, ...], delta0_only: bool = False
) -> SchemeTemplate:
    body = _Parser(text, (), "C").parse()
    return SchemeTemplate(name, tuple(hole_vars), body, delta0_only)


def instantiate_scheme(t: SchemeTemplate, plug: Formula) -> Formula:
    exposed = [v for v in t.hole_vars if v in free_vars(plug)]
    if len(exposed) != t.arity:
        raise ArityError(
            f"{t.name} needs a plug with free variables {', '.join(t.hole_vars) or '(none)'}; "
            f"got {to_text(plug)!r} exposing {len(exposed)}"
        )
    if t.delta0_only and not is_delta0(plug):
        raise ArityError(f"{t.name} accepts only bounded (Delta0) plugs; got {to_text(plug)!r}")
    slots = dict(enumerate(t.hole_vars))

    def fill(args: tuple) -> Formula:
        binding = {slots[i]: a for i, a in enumerate(args)}

        def fn(term, depth):
            if isinstance(term, Free) and term.name in binding:
                return _shift_term(binding[term.name], depth)
            return term

        return _terms_map(plug, fn)

    def walk(f: Formula) -> Formula:
        if isinstance(f, Hole):
            if len(f.args) != t.arity:
                raise ArityError(f"hole with {len(f.args)} arguments in {t.name}")
            return fill(f.args)
        if isinstance(f, Not):
            return Not(walk(f.body))
        if isinstance(f, BINARY):
            return type(f)(walk(f.left), walk(f.right))
        if isinstance(f, (Forall, Exists)):
            return type(f)(walk(f.body), f.name)
        if isinstance(f, (BoundedForall, BoundedExists)):
            return type(f)(f.bound, walk(f.body), f.name)
        return f

    return walk(t.body)


SEPARATION = parse_template(
    "Separation",
    "forall a. exists w. forall x. (x in w <-> (x in a /\\ C(x)))",
    ("x",),
)

DELTA0_SEPARATION = SchemeTemplate(
    "Delta0-Separation", SEPARATION.hole_vars, SEPARATION.body, delta0_only=True
)

REPLACEMENT = parse_template(
    "Replacement",
    "forall S. ((forall x. exists y. (C(x, y) /\\ forall z. (C(x, z) -> z = y)))"
    " -> exists w. forall v. (v in w <-> exists u in S. C(u, v)))",
    ("x", "y"),
)

COLLECTION = parse_template(
    "Collection",
    "forall a. ((forall x in a. exists y. C(x, y))"
    " -> exists b. forall x in a. exists y in b. C(x, y))",
    ("x", "y"),
)

STRONG_COLLECTION = parse_template(
    "Strong Collection",
    "forall a. ((forall x in a. exists y. C(x, y))"
    " -> exists b. ((forall x in a. exists y in b. C(x, y))"
    " /\\ (forall y in b. exists x in a. C(x, y))))",
    ("x", "y"),
)

SUBSET_COLLECTION = parse_template(
    "Subset Collection",
    "forall a. forall b. exists c. forall u. ((forall x in a. exists y in b. C(x, y, u))"
    " -> exists d in c. ((forall x in a. exists y in d. C(x, y, u))"
    " /\\ (forall y in d. exists x in a. C(x, y, u))))",
    ("x", "y", "u"),
)

EPSILON_INDUCTION = parse_template(
    "Epsilon-Induction",
    "(forall a. ((forall x in a. C(x)) -> C(a))) -> forall a. C(a)",
    ("x",),
)

TEMPLATES = {
    t.name: t
    for t in (
        SEPARATION,
        DELTA0_SEPARATION,
        REPLACEMENT,
        COLLECTION,
        STRONG_COLLECTION,
        SUBSET_COLLECTION,
        EPSILON_INDUCTION,
    )
}


# -- random formulas -----------------------------------------------------


def random_formula(
    rng: random.Random,
    depth: int = 4,
    free: tuple[str, ...] = ("a", "b"),
    bounded_only: bool = False,
    _scope: int = 0,
) -> Formula:
    """A well-scoped random formula over ``free`` parameters."""

    def term() -> Term:
        choices = [Free(n) for n in free] + [Bound(i) for i in range(_scope)]
        return rng.choice(choices) if choices else Free("a")

    if depth <= 0 or rng.random() < 0.2:
        roll = rng.random()
        if roll < 0.08:
            return TOP
        if roll < 0.16:
            return BOTTOM
        return (Member if roll < 0.65 else Equal)(term(), term())
    kind = rng.choice(("not", "and", "or", "imp", "iff", "all", "ex"))
    sub = lambda s=_scope: random_formula(rng, depth - 1, free, bounded_only, s)  # noqa: E731
    names = "xyzuvw"
    name = names[_scope % len(names)]
    if kind == "not":
        return Not(sub())
    if kind in ("and", "or", "imp", "iff"):
        node = {"and": And, "or": Or, "imp": Implies, "iff": Iff}[kind]
        return node(sub(), sub())
    bounded = bounded_only or rng.random() < 0.5
    body = sub(_scope + 1)
    if bounded:
        node = BoundedForall if kind == "all" else BoundedExists
        return node(term(), body, name)
    return (Forall if kind == "all" else Exists)(body, name)
