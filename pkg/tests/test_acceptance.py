"""End-to-end acceptance criteria; each test prints one PASS/FAIL line in the summary."""
import itertools
import random
import time

from hypothesis import HealthCheck, given, settings

from hfsets import axioms as ax
from hfsets import formula as fm
from hfsets.ipl import NEEDS_INHABITED, SCHEMATA
from hfsets.kernel import Store, bisim_naive
from hfsets.semantics import (
    Structure,
    eval_bounded,
    eval_formula,
    satisfies,
    structure_from_seeds,
    v_fragment,
)

from conftest import ACCEPTANCE_LINES, fs, fs_fragment, trees


def record(n, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {detail}")
    assert ok, detail


def test_01_bisimulation_quotient():
    rng = random.Random(1)

    def tree(depth):
        if depth == 0 or rng.random() < 0.25:
            return ()
        return tuple(tree(depth - 1) for _ in range(rng.randint(0, 4)))

    pairs = []
    for _ in range(1200):
        u = tree(4)
        # half the pairs are shuffled, duplicated copies so both outcomes occur
        if rng.random() < 0.5:
            kids = list(u) + list(u[: rng.randint(0, len(u))])
            rng.shuffle(kids)
            v = tuple(kids)
        else:
            v = tree(4)
        pairs.append((u, v))
    start = time.perf_counter()
    s = Store()
    agree = sum((s.build(u) == s.build(v)) == bisim_naive(u, v) for u, v in pairs)
    elapsed = time.perf_counter() - start
    same = sum(bisim_naive(u, v) for u, v in pairs)
    record(
        1,
        agree == len(pairs) and elapsed < 5.0,
        f"{agree}/{len(pairs)} pairs agree ({same} bisimilar), {elapsed:.2f}s < 5s",
    )


@settings(max_examples=300, suppress_health_check=[HealthCheck.too_slow])
@given(trees(), trees())
def test_01b_bisimulation_quotient_hypothesis(u, v):
    s = Store()
    assert (s.build(u) == s.build(v)) == bisim_naive(u, v)


def test_02_fragment_cardinalities():
    s = Store()
    sizes = [len(v_fragment(s, n)) for n in range(5)]
    oracle = [len(fs_fragment(n)) for n in range(5)]
    fresh = Store()
    start = time.perf_counter()
    v5 = v_fragment(fresh, 5)
    elapsed = time.perf_counter() - start
    sizes.append(len(v5))
    ok = sizes == [0, 1, 2, 4, 16, 65536] and oracle == sizes[:5] and elapsed < 60
    record(2, ok, f"sizes {sizes}, oracle agrees to n=4, V5 built in {elapsed:.2f}s < 60s")


def test_03_powerset_law(V4):
    s = V4.store
    violations = 0
    checked = 0
    for v in V4.carrier:
        p = s.powerset(v)
        for x in V4.carrier:
            checked += 1
            violations += s.mem(x, p) != (set(s.members(x)) <= set(s.members(v)))
        # members of pow(v) outside the carrier are impossible: subsets keep rank
        violations += not all(m in V4 for m in s.members(p))
    record(3, violations == 0, f"{checked} (x, v) pairs over V4, {violations} violations")


def test_04_monic_presentation():
    s = Store()
    v_fragment(s, 5)
    rng = random.Random(4)
    for _ in range(500):
        s.build(_random_tree(rng, 5))
    bad = 0
    for sid in s.ids():
        kids = s.members(sid)
        bad += len(set(kids)) != len(kids)
        bad += s.intern(kids) != sid
        bad += list(kids) != s.sort_ids(kids)
    n = len(s.ids())
    record(4, bad == 0, f"{n} stored nodes duplicate-free, sorted, and fixed by intern")


def _random_tree(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return ()
    return tuple(_random_tree(rng, depth - 1) for _ in range(rng.randint(0, 4)))


def test_05_theory_suites(V4):
    lines = []
    ok = True
    for theory in ("ECST", "ZF-"):
        reports = ax.check_theory(V4, theory)
        statuses = {r.axiom: r.status for r in reports}
        ok &= ax.FAILS not in statuses.values()
        ok &= {r.axiom for r in reports} == set(ax.THEORY_AXIOMS[theory])
        lines.append(f"{theory}: " + ", ".join(f"{k}={v}" for k, v in sorted(statuses.items())))
    ecst = {r.axiom: r for r in ax.check_theory(V4, "ECST")}
    si = ecst["Strong Infinity"]
    ok &= si.status == ax.LIMIT and si.witness["omega"] == V4.store.omega_upto(2)
    ok &= all(ecst[a].status in (ax.HOLDS, ax.MARGIN) for a in ("Extensionality", "Pairing", "Union"))
    record(5, ok, "zero fails on V4; " + " | ".join(lines))


def test_06_foundation_and_gadget(V4):
    fr = ax.foundation_check(V4)
    rng = random.Random(6)
    sentences = [
        fm.parse("exists x. forall y. ~(y in x)"),
        fm.BOTTOM,
        fm.TOP,
        fm.parse("forall x. exists y. x in y"),
    ]
    while len(sentences) < 40:
        f = fm.random_formula(rng, depth=4, free=())
        if fm.is_closed(f):
            sentences.append(f)
    reports = [ax.lem_gadget(p, V4) for p in sentences]
    agree = sum(r.agrees for r in reports)
    decisions = {r.decision for r in reports}
    ok = fr.status == ax.HOLDS and agree == len(reports) and decisions == {True, False}
    record(
        6,
        ok,
        f"foundation holds on all 16 sets of V4; gadget agrees on {agree}/{len(reports)} sentences",
    )


def test_07_choice(V4):
    s = V4.store
    checked = 0
    ok = True
    for x in V4.carrier:
        if any(not s.members(y) for y in s.members(x)):
            continue
        c = ax.choice_witness(s, x)
        ok &= s.mem(c, s.exp_set(x, s.bigunion(x)))
        ok &= all(s.mem(s.apply(c, y), y) for y in s.members(x))
        checked += 1
    record(7, ok and checked > 0, f"{checked} families in V4 with nonempty members; each c in (Ux)^x")


def test_08_replacement_internalization(V4):
    s = V4.store
    matched = total = 0
    for plug in ax.FUNCTIONAL_PLUGS:
        r = ax.internalize_class_function(V4, plug)
        inst = fm.instantiate_scheme(fm.REPLACEMENT, plug)
        univ, _, matrix = ax._open_prefix(inst)
        premise_ok = eval_formula(V4, matrix.left).value
        concl = fm.instantiate(matrix.right.body, fm.Free("w"))
        for a in V4.carrier:
            image = s.replace(r.__getitem__, a)
            if image not in V4:
                continue  # the asserted w lies beyond the fragment; covered by the margin
            total += 1
            hits = [w for w in V4.carrier if eval_formula(V4, concl, {univ[0]: a, "w": w}).value]
            matched += premise_ok and hits == [image]
        [rep] = ax.check_scheme(V4, fm.REPLACEMENT, [plug], 3, 4)
        total += 1
        matched += rep.status != ax.FAILS
    record(8, matched == total, f"5 functional formulas, {matched}/{total} images equal the unique asserted w")


def test_09_delta0_absoluteness(shared):
    s = shared
    v3, v4 = v_fragment(s, 3), v_fragment(s, 4)
    big = Store()
    v5 = v_fragment(big, 5)
    translate = {x: big.build(s.tree(x)) for x in v3.carrier}
    formulas = list(ax.DELTA0_PLUGS)
    assert len(formulas) == 10 and all(fm.is_delta0(f) for f in formulas)
    checks = bad = 0
    for f in formulas:
        names = fm.free_vars(f)
        for values in itertools.product(v3.carrier, repeat=len(names)):
            env = dict(zip(names, values))
            env5 = {k: translate[v] for k, v in env.items()}
            b = eval_bounded(v3, f, env).value
            bad += b != eval_formula(v4, f, env).value
            bad += b != eval_formula(v5, f, env5).value
            checks += 2
    record(9, bad == 0, f"10 bounded formulas, {checks} comparisons against V4 and V5, {bad} mismatches")


def test_10_transitive_closure_and_iteration(V4):
    s = V4.store
    transitive = [t for t in V4.carrier if s.is_transitive(t)]
    ok = True
    for x in V4.carrier:
        tc = s.transitive_closure(x)
        ok &= s.is_transitive(tc) and s.subset(x, tc)
        ok &= all(s.subset(tc, t) for t in transitive if s.subset(x, t))
    chain, graph = s.iter_omega(s.successor, s.empty(), 7)
    ok &= all(s.apply(graph, s.numeral(n)) == s.numeral(n) for n in range(7))
    ok &= chain == s.numeral(7)
    ok &= fs(s, s.numeral(6)) == _oracle_numeral(6)
    record(10, ok, "tc minimal-transitive for all 16 sets of V4; successor iteration gives 0..6")


def _oracle_numeral(n):
    x = frozenset()
    for _ in range(n):
        x = x | {x}
    return x


def test_11_ipl_soundness():
    store = Store()
    carrier3 = v_fragment(store, 3).carrier
    matrix = [v_fragment(store, n) for n in range(5)]
    matrix += [
        structure_from_seeds(store, [store.numeral(3), store.kpair(store.empty(), store.numeral(1))]),
        Structure(store, carrier3, "reversed", member=lambda x, y: store.mem(y, x)),
        Structure(store, carrier3, "total", member=lambda x, y: True),
        Structure(store, carrier3, "diagonal", member=lambda x, y: x == y),
    ]
    rng = random.Random(11)
    checked = failures = skipped = 0
    for name, schema in sorted(SCHEMATA.items()):
        for s in matrix:
            if name in NEEDS_INHABITED and not s.carrier:
                skipped += 1
                continue
            for _ in range(10):
                p, q, r = (fm.random_formula(rng, depth=3, free=("x", "a")) for _ in range(3))
                checked += 1
                failures += not satisfies(s, schema(p, q, r)).value
    record(
        11,
        failures == 0 and len(SCHEMATA) == 12,
        f"12 schemata x {len(matrix)} structures, {checked} instances true "
        f"({skipped} quantifier-rule/empty-carrier cells excluded)",
    )
