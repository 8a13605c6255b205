"""Satisfaction of formulas in finite structures, with evidence.

Every atom is decidable on a finite carrier, so evaluation is two-valued.
The constructive content is kept in :class:`Evidence`: existentials carry
their least-index witness, disjunctions their branch, refuted universals
their counterexample.  Existential and disjunction nodes are flagged
``truncated`` because only their truth, not the witness, is part of the
proposition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .formula import (
    And,
    Bottom,
    Bound,
    BoundedExists,
    BoundedForall,
    Equal,
    Exists,
    Forall,
    Formula,
    Free,
    Hole,
    Iff,
    Implies,
    Member,
    Not,
    Or,
    Top,
    free_vars,
    is_delta0,
    to_text,
    universal_closure,
)
from .kernel import SetId, Store


class UnboundVariableError(KeyError):
    def __str__(self) -> str:
        return f"unbound variable {self.args[0]!r}"


@dataclass(frozen=True, eq=False)
class Structure:
    """Finite carrier of store ids with an interpretation of membership.

    ``member=None`` means the store's own membership restricted to the
    carrier.  Equality is always id equality.
    """

    store: Store
    carrier: tuple[SetId, ...]
    name: str = "S"
    member: Callable[[SetId, SetId], bool] | None = None
    index: dict = field(init=False, repr=False)
    canonical: bool = field(init=False, repr=False)

    def __post_init__(self):
        if len(set(self.carrier)) != len(self.carrier):
            raise ValueError("carrier must be duplicate-free")
        object.__setattr__(self, "index", {s: i for i, s in enumerate(self.carrier)})
        cmp = self.store.compare
        object.__setattr__(
            self,
            "canonical",
            all(cmp(a, b) < 0 for a, b in zip(self.carrier, self.carrier[1:])),
        )

    def __len__(self) -> int:
        return len(self.carrier)

    def __contains__(self, s: SetId) -> bool:
        return s in self.index

    @property
    def rank_bound(self) -> int:
        """Least n with every carrier element of rank < n."""
        return 1 + max((self.store.rank(s) for s in self.carrier), default=-1)

    def upto_rank(self, n: int) -> list[SetId]:
        return [s for s in self.carrier if self.store.rank(s) < n]

    def holds_member(self, x: SetId, y: SetId) -> bool:
        if self.member is None:
            return self.store.mem(x, y)
        return self.member(x, y)


def v_fragment(store: Store, n: int) -> Structure:
    """All sets of rank < n, in canonical order."""
    return Structure(store, store.members(store.fragment_set(n)), f"V{n}")


def structure_from_seeds(store: Store, seeds: Sequence[SetId], name: str = "seeds") -> Structure:
    ids = set(seeds)
    for s in seeds:
        ids.update(store.members(store.transitive_closure(s)))
    return Structure(store, tuple(store.sort_ids(ids)), name)


# -- evidence ------------------------------------------------------------


@dataclass(frozen=True)
class Evidence:
    value: bool
    kind: str
    witness: SetId | None = None
    children: tuple = ()
    truncated: bool = False
    branch: str | None = None
    binder: str | None = None

    def to_json(self, store: Store) -> dict:
        out = {
            "value": self.value,
            "kind": self.kind,
            "witness": None if self.witness is None else store.text(self.witness),
            "children": [c.to_json(store) for c in self.children],
            "truncated": self.truncated,
        }
        if self.branch is not None:
            out["branch"] = self.branch
        if self.binder is not None:
            out["binder"] = self.binder
        return out

    def __bool__(self) -> bool:
        return self.value


# -- compilation to closures --------------------------------------------
#
# A compiled formula is a function of a stack list.  Free variables occupy
# the bottom slots in ``free_order``; Bound(i) is ``stack[-1 - i]``.


class _Compiler:
    def __init__(self, structure: Structure, free_order: Sequence[str], bounded: bool):
        self.s = structure
        self.free_pos = {n: i for i, n in enumerate(free_order)}
        # ``bounded``: bounded quantifiers range over store members directly,
        # ignoring the carrier.
        self.bounded = bounded

    def term(self, t):
        if isinstance(t, Free):
            if t.name not in self.free_pos:
                raise UnboundVariableError(t.name)
            pos = self.free_pos[t.name]
            return lambda st: st[pos]
        if isinstance(t, Bound):
            neg = -1 - t.index
            return lambda st: st[neg]
        raise TypeError(t)

    def domain(self, bound_fn):
        """Return a function stack -> iterable of elements for a bounded quantifier."""
        store, s = self.s.store, self.s
        if self.bounded:
            return lambda st: store.members(bound_fn(st))
        carrier, index = s.carrier, s.index
        if s.member is None:
            if s.canonical:
                return lambda st: [m for m in store.members(bound_fn(st)) if m in index]
            return lambda st: sorted(
                (m for m in store.members(bound_fn(st)) if m in index), key=index.__getitem__
            )
        member = s.member
        return lambda st: [x for x in carrier if member(x, bound_fn(st))]

    def compile(self, f: Formula):
        if isinstance(f, Top):
            return lambda st: True
        if isinstance(f, Bottom):
            return lambda st: False
        if isinstance(f, Equal):
            l, r = self.term(f.left), self.term(f.right)
            return lambda st: l(st) == r(st)
        if isinstance(f, Member):
            l, r = self.term(f.left), self.term(f.right)
            if self.s.member is None or self.bounded:
                memset = self.s.store.memset
                return lambda st: l(st) in memset(r(st))
            member = self.s.member
            return lambda st: member(l(st), r(st))
        if isinstance(f, Not):
            b = self.compile(f.body)
            return lambda st: not b(st)
        if isinstance(f, And):
            l, r = self.compile(f.left), self.compile(f.right)
            return lambda st: l(st) and r(st)
        if isinstance(f, Or):
            l, r = self.compile(f.left), self.compile(f.right)
            return lambda st: l(st) or r(st)
        if isinstance(f, Implies):
            l, r = self.compile(f.left), self.compile(f.right)
            return lambda st: (not l(st)) or r(st)
        if isinstance(f, Iff):
            l, r = self.compile(f.left), self.compile(f.right)
            return lambda st: ((not l(st)) or r(st)) and ((not r(st)) or l(st))
        if isinstance(f, (Forall, Exists)):
            if self.bounded:
                raise ValueError("bounded evaluation of an unbounded quantifier")
            return self._quant(self.compile(f.body), lambda st: self.s.carrier, isinstance(f, Forall))
        if isinstance(f, (BoundedForall, BoundedExists)):
            dom = self.domain(self.term(f.bound))
            return self._quant(self.compile(f.body), dom, isinstance(f, BoundedForall))
        if isinstance(f, Hole):
            raise ValueError("cannot evaluate a scheme template hole")
        raise TypeError(f"not a formula: {f!r}")

    @staticmethod
    def _quant(body, dom, universal: bool):
        if universal:

            def q(st):
                for x in dom(st):
                    st.append(x)
                    ok = body(st)
                    st.pop()
                    if not ok:
                        return False
                return True

        else:

            def q(st):
                for x in dom(st):
                    st.append(x)
                    ok = body(st)
                    st.pop()
                    if ok:
                        return True
                return False

        return q


class Evaluator:
    """Truth and evidence for formulas over one structure and free-variable order."""

    def __init__(
        self,
        structure: Structure,
        free_order: Sequence[str],
        bounded: bool = False,
        tables: bool = False,
    ):
        self.structure = structure
        self.free_order = tuple(free_order)
        self.bounded = bounded
        self.tables = tables
        self._compiler = _Compiler(structure, self.free_order, bounded)
        self._cache: dict[int, tuple[Formula, Callable]] = {}

    def compiled(self, f: Formula):
        hit = self._cache.get(id(f))
        if hit is None or hit[0] is not f:
            hit = (f, self._compiler.compile(f))
            self._cache[id(f)] = hit
        return hit[1]

    def truth(self, f: Formula, stack: list) -> bool:
        return self.compiled(f)(stack)

    def _domain(self, f, stack):
        if isinstance(f, (Forall, Exists)):
            return self.structure.carrier
        return self._compiler.domain(self._compiler.term(f.bound))(stack)

    def evidence(self, f: Formula, stack: list) -> Evidence:
        if isinstance(f, (Top, Bottom, Equal, Member)):
            return Evidence(self.truth(f, stack), "atomic")
        if isinstance(f, Not):
            inner = self.evidence(f.body, stack)
            return Evidence(not inner.value, "not", children=(inner,))
        if isinstance(f, And):
            l = self.evidence(f.left, stack)
            if not l.value:
                return Evidence(False, "and", children=(l,), branch="left")
            r = self.evidence(f.right, stack)
            return Evidence(r.value, "and", children=(l, r) if r.value else (r,),
                            branch=None if r.value else "right")
        if isinstance(f, Or):
            l = self.evidence(f.left, stack)
            if l.value:
                return Evidence(True, "or", children=(l,), truncated=True, branch="left")
            r = self.evidence(f.right, stack)
            if r.value:
                return Evidence(True, "or", children=(r,), truncated=True, branch="right")
            return Evidence(False, "or", children=(l, r), truncated=True)
        if isinstance(f, Implies):
            l = self.evidence(f.left, stack)
            if not l.value:
                return Evidence(True, "implies", children=(l,), branch="antecedent-false")
            r = self.evidence(f.right, stack)
            return Evidence(r.value, "implies", children=(l, r))
        if isinstance(f, Iff):
            # evaluated as the conjunction of both implications
            l = self.evidence(f.left, stack)
            r = self.evidence(f.right, stack)
            fwd = Evidence(not l.value or r.value, "implies", children=(l, r))
            bwd = Evidence(not r.value or l.value, "implies", children=(r, l))
            return Evidence(fwd.value and bwd.value, "iff", children=(fwd, bwd))
        if isinstance(f, (Forall, BoundedForall)):
            kind = "forall" if isinstance(f, Forall) else "bounded-forall"
            dom = list(self._domain(f, stack))
            table = []
            for x in dom:
                stack.append(x)
                ok = self.truth(f.body, stack)
                if not ok or self.tables:
                    sub = self.evidence(f.body, stack)
                stack.pop()
                if not ok:
                    return Evidence(False, kind, witness=x, children=(sub,), binder=f.name)
                if self.tables:
                    table.append(Evidence(True, "instance", witness=x, children=(sub,)))
            return Evidence(True, kind, children=tuple(table), binder=f.name)
        if isinstance(f, (Exists, BoundedExists)):
            kind = "exists" if isinstance(f, Exists) else "bounded-exists"
            for x in self._domain(f, stack):
                stack.append(x)
                ok = self.truth(f.body, stack)
                if ok:
                    sub = self.evidence(f.body, stack)
                    stack.pop()
                    return Evidence(True, kind, witness=x, children=(sub,), truncated=True,
                                    binder=f.name)
                stack.pop()
            return Evidence(False, kind, truncated=True, binder=f.name)
        raise TypeError(f"cannot evaluate {f!r}")


def _stack(env: Mapping[str, SetId], order: Sequence[str]) -> list:
    try:
        return [env[n] for n in order]
    except KeyError as e:
        raise UnboundVariableError(e.args[0]) from None


def _check_env(structure: Structure, env: Mapping[str, SetId], carrier_bound: bool = True):
    for name, value in env.items():
        if carrier_bound and value not in structure.index:
            raise ValueError(f"{name} is bound to a set outside the carrier of {structure.name}")


def eval_formula(
    structure: Structure,
    f: Formula,
    env: Mapping[str, SetId] | None = None,
    tables: bool = False,
) -> Evidence:
    """Evaluate ``f`` with free variables taken from ``env``; quantifiers range over the carrier."""
    env = dict(env or {})
    order = free_vars(f)
    missing = [n for n in order if n not in env]
    if missing:
        raise UnboundVariableError(missing[0])
    _check_env(structure, {n: env[n] for n in order})
    return Evaluator(structure, order, tables=tables).evidence(f, _stack(env, order))


def truth(structure: Structure, f: Formula, env: Mapping[str, SetId] | None = None) -> bool:
    env = dict(env or {})
    order = free_vars(f)
    return Evaluator(structure, order).truth(f, _stack(env, order))


def satisfies(structure: Structure, f: Formula) -> Evidence:
    """Universal closure of ``f`` over the carrier."""
    return eval_formula(structure, universal_closure(f), {})


def eval_bounded(
    structure: Structure, f: Formula, env: Mapping[str, SetId] | None = None
) -> Evidence:
    """Evaluate a Delta0 formula with bounded quantifiers ranging over actual members.

    The carrier plays no role, so values need not lie in it.
    """
    if not is_delta0(f):
        raise ValueError(f"not a bounded formula: {to_text(f)}")
    env = dict(env or {})
    order = free_vars(f)
    return Evaluator(structure, order, bounded=True).evidence(f, _stack(env, order))


def check_evidence(structure: Structure, f: Formula, env: Mapping[str, SetId], ev: Evidence) -> bool:
    """Re-evaluate every witness recorded in ``ev``; True if all are valid."""
    order = free_vars(f)
    evaluator = Evaluator(structure, order)
    return _check(evaluator, f, _stack(dict(env), order), ev)


def _check(ev_: Evaluator, f: Formula, stack: list, ev: Evidence) -> bool:
    if ev.value != ev_.truth(f, stack):
        return False
    if isinstance(f, (Exists, BoundedExists, Forall, BoundedForall)) and ev.witness is not None:
        stack.append(ev.witness)
        ok = ev_.truth(f.body, stack) == ev.value
        if ok and ev.children:
            ok = _check(ev_, f.body, stack, ev.children[0])
        stack.pop()
        return ok
    if isinstance(f, (Not,)):
        return _check(ev_, f.body, stack, ev.children[0])
    if isinstance(f, (And, Or, Implies)) and ev.children:
        if ev.branch in ("left", "antecedent-false"):
            return _check(ev_, f.left, stack, ev.children[0])
        if ev.branch == "right":
            return _check(ev_, f.right, stack, ev.children[0])
        return all(_check(ev_, g, stack, c) for g, c in zip((f.left, f.right), ev.children))
    return True
