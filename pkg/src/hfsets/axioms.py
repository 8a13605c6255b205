"""Axiom catalog and finite checks of set-theoretic axioms.

Checks are stratified.  A closed axiom in prenex-ish form
``forall a1..ak. exists w1..wm. matrix`` is read with the leading universals
over carrier sets of rank < ``seed_rank`` and the following existentials over
rank < ``witness_rank``; quantifiers inside the matrix range over the whole
carrier.  Each entry declares the rank growth (``margin``) of its witness
construction, so a check at the edge of a fragment can be told apart from a
genuine failure.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import formula as fm
from .formula import Formula, SchemeTemplate, instantiate_scheme, parse, to_text
from .kernel import SetId, Store
from .semantics import Evaluator, Structure, eval_formula, truth

HOLDS = "holds"
FAILS = "fails"
MARGIN = "holds-with-margin"
LIMIT = "limit-only-approximation"

THEORIES = ("ZF-", "ZF", "ZFC", "ECST", "CZF", "IZF")

CARRIER_ONLY = "carrier-relative instance only"
DECIDABLE = "evaluation is decidable at this scale; LEM-sensitivity not observable"


class UnknownAxiomError(KeyError):
    def __str__(self) -> str:
        return f"unknown axiom or theory {self.args[0]!r}"


class NotFunctional(ValueError):
    """A binary formula fails to define a total function on the carrier."""

    def __init__(self, x: SetId, candidates: Sequence[SetId]):
        self.x = x
        self.candidates = tuple(candidates)
        what = "no value" if not candidates else f"{len(candidates)} values"
        super().__init__(f"formula assigns {what} to set #{x}")


class NoChoiceFunction(ValueError):
    def __init__(self, member: SetId):
        self.member = member
        super().__init__(f"set #{member} is an empty member; no choice function exists")


# -- reports -------------------------------------------------------------


def _json_value(store: Store, v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return store.text(v)
    if isinstance(v, dict):
        return {k: _json_value(store, x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(store, x) for x in v]
    raise TypeError(f"cannot serialise {v!r}")


@dataclass
class CheckReport:
    """Outcome of one axiom check.

    ``counterexample`` and ``witness`` map names to set ids (or nested
    lists/dicts of them); they are rendered as canonical set text in JSON.
    """

    axiom: str
    structure: str
    seed: int
    witness_rank: int
    status: str
    theory: tuple[str, ...] = ()
    counterexample: dict | None = None
    witness: dict | None = None
    notes: str = ""
    instances: list["CheckReport"] = field(default_factory=list)
    # closed formula that was checked, kept for re-evaluation
    formula: Formula | None = field(default=None, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return self.status != FAILS

    def to_json(self, store: Store) -> dict:
        out = {
            "axiom": self.axiom,
            "theory": list(self.theory),
            "structure": self.structure,
            "bounds": {"seed": self.seed, "witness": self.witness_rank},
            "status": self.status,
            "counterexample": _json_value(store, self.counterexample),
            "witness": _json_value(store, self.witness),
            "notes": self.notes,
        }
        if self.instances:
            out["instances"] = [r.to_json(store) for r in self.instances]
        return out


# -- catalog -------------------------------------------------------------


@dataclass(frozen=True)
class AxiomEntry:
    name: str
    kind: str  # "formula" | "scheme" | "native"
    theories: tuple[str, ...] = ()
    caveat: str = "none"  # none | needs-rank-margin | limit-only
    margin: int = 0
    formula: Formula | None = None
    template: SchemeTemplate | None = None
    plugs: tuple[Formula, ...] = ()
    native: Callable | None = None


DELTA0_PLUGS = tuple(
    parse(t)
    for t in (
        "x = x",
        "exists z in x. z in a",
        "forall z in x. ~(z = z)",
        "x in a",
        "~(x in a)",
        "forall z in x. z in a",
        "exists z in x. forall w in z. ~(w = w)",
        "forall z in x. forall w in z. w in x",
        "x = a \\/ a in x",
        "exists z in a. (x in z /\\ ~(x = z))",
    )
)

UNBOUNDED_PLUGS = tuple(
    parse(t)
    for t in (
        "exists y. x in y",
        "forall y. (y in x -> exists z. z in y)",
        "exists y. (y in x /\\ forall z. ~(z in y))",
        "forall y. (~(x in y) \\/ exists z. z in x)",
        "exists y. forall z. (z in y <-> z in x)",
    )
)

# each defines a total class function x |-> y on any transitive fragment
FUNCTIONAL_PLUGS = tuple(
    parse(t)
    for t in (
        "y = x",
        "forall z. (z in y <-> exists w in x. z in w)",
        "x = x /\\ forall z. ~(z in y)",
        "forall z. (z in y <-> (z in x /\\ forall t in z. ~(t = t)))",
        "forall z. (z in y <-> (z in x /\\ exists t in z. t = t))",
    )
)

COLLECTION_PLUGS = tuple(
    parse(t)
    for t in (
        "y = x",
        "x in y",
        "forall z in x. z in y",
        "forall z. (z in y <-> z = x)",
        "exists z in y. ~(z = x)",
    )
)

SUBSET_COLLECTION_PLUGS = tuple(
    parse(t)
    for t in (
        "y = x /\\ u = u",
        "y in u /\\ x = x",
        "x = y \\/ y in u",
        "x in y /\\ ~(y = u)",
    )
)

SUCCESSOR = parse("forall z. (z in y <-> (z in x \\/ z = x))")


_FORMULAS = {
    "Extensionality": ("forall a. forall b. ((forall x. (x in a <-> x in b)) -> a = b)", 0),
    "Empty Set": ("exists e. forall y. ~(y in e)", 0),
    "Pairing": ("forall x. forall y. exists z. forall w. (w in z <-> (w = x \\/ w = y))", 1),
    "Union": ("forall a. exists u. forall x. (x in u <-> exists y in a. x in y)", 0),
    "Powerset": ("forall v. exists p. forall x. (x in p <-> forall y in x. y in v)", 1),
    "Foundation": (
        "forall v. ((exists y. y in v) -> exists x. (x in v /\\ forall y in x. ~(y in v)))",
        0,
    ),
}

_SCHEMES = {
    "Separation": (fm.SEPARATION, DELTA0_PLUGS + UNBOUNDED_PLUGS, 0),
    "Delta0-Separation": (fm.DELTA0_SEPARATION, DELTA0_PLUGS, 0),
    "Replacement": (fm.REPLACEMENT, FUNCTIONAL_PLUGS, 1),
    "Epsilon-Induction": (fm.EPSILON_INDUCTION, DELTA0_PLUGS + UNBOUNDED_PLUGS, 0),
    "Collection": (fm.COLLECTION, COLLECTION_PLUGS, 1),
    "Strong Collection": (fm.STRONG_COLLECTION, COLLECTION_PLUGS, 1),
    "Subset Collection": (fm.SUBSET_COLLECTION, SUBSET_COLLECTION_PLUGS, 2),
}

_SIGMA = ("Extensionality", "Empty Set", "Pairing", "Union")
THEORY_AXIOMS: dict[str, tuple[str, ...]] = {
    "ZF-": _SIGMA + ("Infinity", "Powerset", "Separation", "Replacement"),
}
THEORY_AXIOMS["ZF"] = THEORY_AXIOMS["ZF-"] + ("Foundation",)
THEORY_AXIOMS["ZFC"] = THEORY_AXIOMS["ZF"] + ("Choice",)
THEORY_AXIOMS["ECST"] = _SIGMA + ("Strong Infinity", "Delta0-Separation", "Replacement")
THEORY_AXIOMS["IZF"] = _SIGMA + (
    "Infinity",
    "Powerset",
    "Separation",
    "Epsilon-Induction",
    "Collection",
)
THEORY_AXIOMS["CZF"] = _SIGMA + (
    "Strong Infinity",
    "Delta0-Separation",
    "Epsilon-Induction",
    "Strong Collection",
    "Subset Collection",
)


def _theories_of(name: str) -> tuple[str, ...]:
    return tuple(t for t in THEORIES if name in THEORY_AXIOMS[t])


def _build_catalog() -> dict[str, AxiomEntry]:
    cat = {}
    for name, (text, margin) in _FORMULAS.items():
        cat[name] = AxiomEntry(
            name,
            "formula",
            _theories_of(name),
            "needs-rank-margin" if margin else "none",
            margin,
            formula=parse(text),
        )
    for name, (tpl, plugs, margin) in _SCHEMES.items():
        cat[name] = AxiomEntry(
            name,
            "scheme",
            _theories_of(name),
            "needs-rank-margin" if margin else "none",
            margin,
            template=tpl,
            plugs=plugs,
        )
    natives = {
        "Infinity": (_check_infinity, 0, "limit-only"),
        "Strong Infinity": (_check_strong_infinity, 0, "limit-only"),
        "Exponentiation": (_check_exponentiation, 3, "needs-rank-margin"),
        "Choice": (_check_choice, 2, "needs-rank-margin"),
    }
    for name, (fn, margin, caveat) in natives.items():
        cat[name] = AxiomEntry(name, "native", _theories_of(name), caveat, margin, native=fn)
    return cat


def _norm(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch.isalnum())


def lookup_axiom(name: str) -> AxiomEntry:
    key = _norm(name)
    aliases = {"einduction": "epsiloninduction", "d0separation": "delta0separation"}
    key = aliases.get(key, key)
    for entry in CATALOG.values():
        if _norm(entry.name) == key:
            return entry
    raise UnknownAxiomError(name)


def lookup_theory(name: str) -> str:
    key = name.strip().upper().replace("^", "")
    if key in ("ZF-", "ZFMINUS"):
        return "ZF-"
    if key in THEORY_AXIOMS:
        return key
    raise UnknownAxiomError(name)


# -- stratified evaluation ----------------------------------------------


def _open_prefix(f: Formula):
    """Split leading forall/exists blocks off a closed formula, naming binders freshly."""
    taken: set[str] = set()

    def fresh(name: str) -> str:
        out, i = name, 2
        while out in taken:
            out, i = f"{name}_{i}", i + 1
        taken.add(out)
        return out

    univ, exist = [], []
    while isinstance(f, fm.Forall):
        n = fresh(f.name)
        univ.append(n)
        f = fm.instantiate(f.body, fm.Free(n))
    while isinstance(f, fm.Exists):
        n = fresh(f.name)
        exist.append(n)
        f = fm.instantiate(f.body, fm.Free(n))
    return univ, exist, f


def _validate_bounds(s: Structure, seed: int, witness: int):
    if not (0 <= seed <= witness <= s.rank_bound):
        raise ValueError(
            f"need 0 <= seed_rank ({seed}) <= witness_rank ({witness}) <= "
            f"rank bound of {s.name} ({s.rank_bound})"
        )


def check_formula(
    s: Structure,
    f: Formula,
    seed_rank: int,
    witness_rank: int,
    name: str | None = None,
    margin: int = 0,
    theory: tuple[str, ...] = (),
) -> CheckReport:
    """Stratified check of a formula; free variables are closed universally first."""
    _validate_bounds(s, seed_rank, witness_rank)
    closed = fm.universal_closure(f)
    univ, exist, matrix = _open_prefix(closed)
    ev = Evaluator(s, univ + exist)
    run = ev.compiled(matrix)
    seeds = s.upto_rank(seed_rank)
    wits = s.upto_rank(witness_rank)
    last = None
    checked = 0
    for outer in itertools.product(seeds, repeat=len(univ)):
        stack = list(outer)
        found = None
        for inner in itertools.product(wits, repeat=len(exist)):
            stack[len(univ):] = inner
            if run(stack):
                found = inner
                break
        checked += 1
        if found is None:
            return CheckReport(
                name or to_text(f),
                s.name,
                seed_rank,
                witness_rank,
                FAILS,
                theory,
                counterexample=dict(zip(univ, outer)),
                notes=f"no witness of rank < {witness_rank}" if exist else "matrix false",
                formula=closed,
            )
        last = dict(zip(univ, outer)) | dict(zip(exist, found))
    status = MARGIN if margin > 0 else HOLDS
    return CheckReport(
        name or to_text(f),
        s.name,
        seed_rank,
        witness_rank,
        status,
        theory,
        witness=last if last else None,
        notes=f"{checked} outer assignments checked; {DECIDABLE}",
        formula=closed,
    )


def verify_report(s: Structure, report: CheckReport) -> bool:
    """Re-evaluate a report's claim through :func:`eval_formula`."""
    if report.formula is None:
        return True
    univ, exist, matrix = _open_prefix(report.formula)
    if report.status == FAILS:
        env = dict(report.counterexample or {})
        for inner in itertools.product(s.upto_rank(report.witness_rank), repeat=len(exist)):
            if eval_formula(s, matrix, env | dict(zip(exist, inner))).value:
                return False
        return True
    if report.witness:
        return eval_formula(s, matrix, report.witness).value
    return True


def check_scheme(
    s: Structure,
    t: SchemeTemplate,
    plugs: Sequence[Formula],
    seed_rank: int,
    witness_rank: int,
    margin: int | None = None,
    theory: tuple[str, ...] = (),
) -> list[CheckReport]:
    if margin is None:
        margin = _SCHEMES[t.name][2] if t.name in _SCHEMES else 0
    reports = []
    for plug in plugs:
        inst = instantiate_scheme(t, plug)
        r = check_formula(
            s, inst, seed_rank, witness_rank, f"{t.name}[{to_text(plug)}]", margin, theory
        )
        if t.name in ("Collection", "Strong Collection", "Subset Collection"):
            r.notes = f"{CARRIER_ONLY}; {r.notes}"
        reports.append(r)
    return reports


def check_axiom(
    s: Structure, a: AxiomEntry | str, seed_rank: int, witness_rank: int
) -> CheckReport:
    entry = a if isinstance(a, AxiomEntry) else lookup_axiom(a)
    _validate_bounds(s, seed_rank, witness_rank)
    if entry.kind == "formula":
        return check_formula(
            s, entry.formula, seed_rank, witness_rank, entry.name, entry.margin, entry.theories
        )
    if entry.kind == "native":
        r = entry.native(s, seed_rank, witness_rank)
        r.theory = entry.theories
        return r
    parts = check_scheme(
        s, entry.template, entry.plugs, seed_rank, witness_rank, entry.margin, entry.theories
    )
    failed = [r for r in parts if r.status == FAILS]
    status = FAILS if failed else (MARGIN if entry.margin > 0 else HOLDS)
    notes = f"{len(parts)} instances, {len(failed)} failing"
    if entry.name in ("Collection", "Strong Collection", "Subset Collection"):
        notes = f"{CARRIER_ONLY}; {notes}"
    if entry.name == "Separation":
        notes += "; PR-dependence: vacuous at finite scale"
    return CheckReport(
        entry.name,
        s.name,
        seed_rank,
        witness_rank,
        status,
        entry.theories,
        counterexample=failed[0].counterexample if failed else None,
        notes=notes,
        instances=parts,
    )


def default_bounds(s: Structure, entry: AxiomEntry, seed_rank=None, witness_rank=None):
    """Witness rank defaults to the carrier bound; the seed is lowered by the entry's margin."""
    witness = s.rank_bound if witness_rank is None else witness_rank
    seed = witness if seed_rank is None else seed_rank
    return max(0, min(seed, witness - entry.margin)), witness


def check_theory(
    s: Structure, theory: str, seed_rank: int | None = None, witness_rank: int | None = None
) -> list[CheckReport]:
    key = lookup_theory(theory)
    reports = []
    for name in sorted(THEORY_AXIOMS[key]):
        entry = CATALOG[name]
        seed, wit = default_bounds(s, entry, seed_rank, witness_rank)
        r = check_axiom(s, entry, seed, wit)
        requested = wit if seed_rank is None else seed_rank
        if seed < requested:
            r.notes = f"seed rank lowered from {requested} to {seed} by declared margin {entry.margin}; {r.notes}"
        reports.append(r)
    return reports


# -- class functions -----------------------------------------------------


def internalize_class_function(
    s: Structure,
    phi: Formula,
    x: str = "x",
    y: str = "y",
    domain: Sequence[SetId] | None = None,
    env: dict | None = None,
) -> dict[SetId, SetId]:
    """Map each domain element to the unique carrier y with phi(x, y).

    Raises :class:`NotFunctional` naming the first x with zero or several values.
    """
    env = dict(env or {})
    order = [x, y] + [n for n in fm.free_vars(phi) if n not in (x, y)]
    ev = Evaluator(s, order)
    run = ev.compiled(phi)
    rest = [env[n] for n in order[2:]]
    out = {}
    for a in s.carrier if domain is None else domain:
        hits = [b for b in s.carrier if run([a, b] + rest)]
        if len(hits) != 1:
            raise NotFunctional(a, hits)
        out[a] = hits[0]
    return out


def replacement_image(s: Structure, phi: Formula, a: SetId) -> SetId:
    """The set of phi-images of members of ``a``, via internalization then replace."""
    r = internalize_class_function(s, phi)
    return s.store.replace(r.__getitem__, a)


# -- foundation and the LEM gadget --------------------------------------


def foundation_minimal(store: Store, v: SetId) -> SetId | None:
    """A member x of v with x and v disjoint; the least-rank member qualifies."""
    vs = store.memset(v)
    for x in store.members(v):  # canonical order is rank-first
        if not (store.memset(x) & vs):
            return x
    return None


def foundation_check(s: Structure) -> CheckReport:
    store = s.store
    minimal = []
    for v in s.carrier:
        if not store.members(v):
            continue
        x = foundation_minimal(store, v)
        if x is None:
            return CheckReport(
                "Foundation", s.name, s.rank_bound, s.rank_bound, FAILS,
                _theories_of("Foundation"), counterexample={"v": v},
            )
        minimal.append([v, x])
    return CheckReport(
        "Foundation",
        s.name,
        s.rank_bound,
        s.rank_bound,
        HOLDS,
        _theories_of("Foundation"),
        witness={"minimal": minimal},
        notes=f"{len(minimal)} nonempty sets each have an element disjoint from them",
    )


@dataclass
class GadgetReport:
    sentence: str
    structure: str
    s_p: SetId
    minimal: SetId
    decision: bool
    direct: bool
    notes: str = ""

    @property
    def agrees(self) -> bool:
        return self.decision == self.direct

    def to_json(self, store: Store) -> dict:
        return {
            "sentence": self.sentence,
            "structure": self.structure,
            "S_p": store.text(self.s_p),
            "minimal": store.text(self.minimal),
            "decision": "p" if self.decision else "not p",
            "direct": self.direct,
            "agrees": self.agrees,
            "notes": self.notes,
        }


def lem_gadget(p: Formula, s: Structure) -> GadgetReport:
    """Decide a closed sentence from a Foundation-minimal element of S_p.

    S_p = {x in omega | x = 1 or (x = 0 and p)}, cut down to {0, 1}.
    """
    if fm.free_vars(p):
        raise ValueError(f"sentence has free variables: {', '.join(fm.free_vars(p))}")
    store = s.store
    p_holds = eval_formula(s, p).value
    zero = store.empty()
    one = store.singleton(zero)
    s_p = store.separate(store.omega_upto(2), lambda x: x == one or (x == zero and p_holds))
    z = foundation_minimal(store, s_p)
    assert z is not None, "1 is always in S_p"
    if z == one:
        # 0 would be disjoint from S_p, so its absence means p failed
        decision = False
    else:
        assert z == zero
        decision = True
    return GadgetReport(
        to_text(p),
        s.name,
        s_p,
        z,
        decision,
        p_holds,
        notes="resizing via bisimulation is invisible at finite scale; " + DECIDABLE,
    )


# -- choice ---------------------------------------------------------------


def choice_witness(store: Store, x: SetId) -> SetId:
    """Graph {<y, least member of y> : y in x}; checked to lie in (U x)^x."""
    for y in store.members(x):
        if not store.members(y):
            raise NoChoiceFunction(y)
    c = store.intern(store.kpair(y, store.members(y)[0]) for y in store.members(x))
    assert store.mem(c, store.exp_set(x, store.bigunion(x)))
    return c


def _check_choice(s: Structure, seed: int, witness: int) -> CheckReport:
    store = s.store
    last = None
    n = 0
    for x in s.upto_rank(seed):
        try:
            c = choice_witness(store, x)
        except NoChoiceFunction:
            continue
        n += 1
        if store.rank(c) >= witness or not all(
            store.mem(store.apply(c, y), y) for y in store.members(x)
        ):
            return CheckReport("Choice", s.name, seed, witness, FAILS,
                               counterexample={"x": x},
                               notes=f"choice graph has rank {store.rank(c)}")
        last = {"x": x, "c": c}
    return CheckReport(
        "Choice", s.name, seed, witness, MARGIN, witness=last,
        notes=f"{n} families of nonempty sets; each choice graph lies in (Ux)^x; "
        "AC-dependence: vacuous at finite scale",
    )


def _check_exponentiation(s: Structure, seed: int, witness: int) -> CheckReport:
    store = s.store
    last = None
    for a, b in itertools.product(s.upto_rank(seed), repeat=2):
        e = store.exp_set(a, b)
        ok = store.rank(e) < witness
        ok = ok and store.size(e) == store.size(b) ** store.size(a)
        ok = ok and all(store.is_function(g, a, b) for g in store.members(e))
        # every carrier set that is a function graph a -> b is collected
        ok = ok and all(store.mem(g, e) for g in s.carrier if store.is_function(g, a, b))
        if not ok:
            return CheckReport("Exponentiation", s.name, seed, witness, FAILS,
                               counterexample={"a": a, "b": b})
        last = {"a": a, "b": b, "e": e}
    return CheckReport("Exponentiation", s.name, seed, witness, MARGIN, witness=last,
                       notes="function sets built as sets of Kuratowski-pair graphs")


# -- infinity ----------------------------------------------------------------


def ind_k(store: Store, b: SetId, k: int) -> bool:
    """Ind relativized to k: contains 0 (if k > 0) and successors of members of rank < k-1."""
    zero = store.empty()
    if k > 0 and not store.mem(zero, b):
        return False
    return all(
        store.mem(store.successor(x), b) for x in store.members(b) if store.rank(x) < k - 1
    )


def strong_infinity_check(k: int, s: Structure) -> CheckReport:
    store = s.store
    w = store.omega_upto(k)
    if k > s.rank_bound:
        raise ValueError(f"omega_upto({k}) has members outside the rank bound of {s.name}")
    if not ind_k(store, w, k):
        return CheckReport("Strong Infinity", s.name, k, k, FAILS,
                           counterexample={"omega": w},
                           notes=f"omega_upto({k}) does not satisfy Ind_{k}")
    inductive = [b for b in s.carrier if ind_k(store, b, k)]
    for b in inductive:
        if not store.subset(w, b):
            return CheckReport("Strong Infinity", s.name, k, k, FAILS,
                               counterexample={"b": b},
                               notes=f"Ind_{k} set not containing omega_upto({k})")
    where = "in" if w in s else "outside"
    return CheckReport(
        "Strong Infinity",
        s.name,
        k,
        k,
        LIMIT,
        _theories_of("Strong Infinity"),
        witness={"omega": w},
        notes=f"omega_upto({k}) ({where} the carrier) is contained in all "
        f"{len(inductive)} Ind_{k} carrier sets; omega itself is never materialized",
    )


def _k_for(witness: int) -> int:
    return max(0, witness - 2)


def _check_strong_infinity(s: Structure, seed: int, witness: int) -> CheckReport:
    r = strong_infinity_check(_k_for(witness), s)
    r.seed, r.witness_rank = seed, witness
    return r


INFINITY = parse(
    "exists a. ((exists e in a. forall y. ~(y in e)) /\\ "
    "forall x in a. exists s in a. forall z. (z in s <-> (z in x \\/ z = x)))"
)


def _check_infinity(s: Structure, seed: int, witness: int) -> CheckReport:
    store = s.store
    k = _k_for(witness)
    full = truth(s, INFINITY)
    approx = ind_k(store, store.omega_upto(k), k)
    status = FAILS if full or not approx else LIMIT
    return CheckReport(
        "Infinity",
        s.name,
        seed,
        witness,
        status,
        witness={"omega": store.omega_upto(k)},
        notes=(
            f"no carrier set is inductive under unrestricted successor (finite sets never are); "
            f"omega_upto({k}) satisfies Ind_{k}"
            if status == LIMIT
            else "unexpected: finite inductive set found"
        ),
    )


# -- collection ---------------------------------------------------------------


def collection_probe(
    s: Structure, phi: Formula, a: SetId, x: str = "x", y: str = "y"
) -> CheckReport:
    """Carrier-relative Collection instance for theta(x, y) over members of ``a``."""
    store = s.store
    name = f"Collection[{to_text(phi)}]"
    order = [x, y] + [n for n in fm.free_vars(phi) if n not in (x, y)]
    if len(order) != 2:
        raise ValueError("collection_probe needs a formula in exactly x and y")
    run = Evaluator(s, order).compiled(phi)
    least = {}
    for m in store.members(a):
        hit = next((b for b in s.carrier if run([m, b])), None)
        if hit is None:
            return CheckReport(name, s.name, store.rank(a) + 1, s.rank_bound, HOLDS,
                               notes=f"premise fails; no b sought; {CARRIER_ONLY}")
        least[m] = hit
    b = store.replace(least.__getitem__, a)
    assert all(run([m, least[m]]) for m in store.members(a))
    status = HOLDS if b in s else MARGIN
    return CheckReport(
        name,
        s.name,
        store.rank(a) + 1,
        s.rank_bound,
        status,
        witness={"a": a, "b": b},
        notes=f"b collects least witnesses ({'in' if b in s else 'outside'} the carrier); "
        f"{CARRIER_ONLY}",
    )


CATALOG = _build_catalog()
