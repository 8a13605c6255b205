import itertools
import random

import pytest
from hypothesis import given, strategies as st

from hfsets.kernel import ResourceLimitError, Store, StoreConfig, bisim_naive
from hfsets.semantics import v_fragment

from conftest import EMPTY, fs, fs_kpair, fs_numeral, fs_powerset, fs_rank, trees


def test_duplicates_collapse(store):
    e = store.empty()
    assert store.intern([e, e]) == store.intern([e])


def test_order_irrelevant(store):
    e = store.empty()
    one = store.singleton(e)
    assert store.intern([one, e]) == store.intern([e, one])


def test_members(store):
    e = store.empty()
    one = store.singleton(e)
    assert store.members(e) == ()
    assert store.members(store.intern([one, e])) == (e, one)


def test_intern_rejects_unknown_ids(store):
    with pytest.raises(ValueError):
        store.intern([99])


@given(trees(), trees())
def test_quotient_matches_naive_bisimulation(u, v):
    s = Store()
    assert (s.build(u) == s.build(v)) == bisim_naive(u, v)


@given(trees())
def test_store_round_trip(t):
    s = Store()
    x = s.build(t)
    assert s.intern(s.members(x)) == x
    assert len(set(s.members(x))) == len(s.members(x))
    assert fs(s, x) == fs(s, s.build(s.tree(x)))


def test_bisim_naive_examples():
    assert bisim_naive(((), ()), ((),))
    assert not bisim_naive(((),), (((),),))


def test_mem(store):
    e = store.empty()
    assert store.mem(e, store.singleton(e))
    assert not store.mem(e, e)


def test_numeral_order(store):
    for m, n in itertools.product(range(7), repeat=2):
        assert store.mem(store.numeral(m), store.numeral(n)) == (m < n)


def test_pairs(store):
    e = store.empty()
    one = store.singleton(e)
    assert store.pair(e, e) == store.singleton(e)
    assert store.kpair(e, one) != store.kpair(one, e)


def test_kpair_injective_on_v3(V3):
    s = V3.store
    seen = {}
    for x, y in itertools.product(V3.carrier, repeat=2):
        p = s.kpair(x, y)
        assert seen.setdefault(p, (x, y)) == (x, y)
        assert s.unpair(p) == (x, y)
        assert fs(s, p) == fs_kpair(fs(s, x), fs(s, y))


def test_unions(store):
    e = store.empty()
    one = store.singleton(e)
    x = store.pair(one, store.singleton(one))
    assert store.bigunion(e) == e
    assert store.text(store.bigunion(x)) == "{{},{{}}}"
    assert store.union2(store.numeral(1), store.numeral(2)) == store.numeral(2)


def test_union2_is_bigunion_of_pair(V3):
    s = V3.store
    for x, y in itertools.product(V3.carrier, repeat=2):
        assert s.union2(x, y) == s.bigunion(s.pair(x, y))


def test_separate(store):
    a = store.numeral(4)
    assert store.separate(a, lambda y: True) == a
    assert store.separate(a, lambda y: False) == store.empty()
    evens = {store.numeral(0), store.numeral(2)}
    assert store.separate(a, lambda y: y in evens) == store.intern(evens)


def test_replace(store):
    e = store.empty()
    a = store.pair(e, store.numeral(3))
    assert store.replace(lambda y: y, a) == a
    assert store.replace(lambda y: e, a) == store.singleton(e)
    r = store.replace(store.singleton, store.numeral(2))
    one = store.singleton(e)
    assert store.mem(store.singleton(e), r) and store.mem(store.singleton(one), r)
    assert store.size(r) == 2


def test_powerset(store):
    e = store.empty()
    assert store.powerset(e) == store.singleton(e)
    assert store.text(store.powerset(store.singleton(e))) == "{{},{{}}}"
    assert store.size(store.powerset(store.numeral(3))) == 8


def test_powerset_law_and_rank_on_v4(V4):
    s = V4.store
    for v in V4.carrier:
        p = s.powerset(v)
        assert fs(s, p) == fs_powerset(fs(s, v))
        assert s.rank(p) == s.rank(v) + 1
        for x in V4.carrier:
            assert s.mem(x, p) == (set(s.members(x)) <= set(s.members(v)))


def test_numerals(store):
    assert store.numeral(1) == store.singleton(store.empty())
    n3 = store.numeral(3)
    assert store.members(n3) == tuple(store.numeral(i) for i in range(3))
    assert store.is_transitive(n3)
    assert store.omega_upto(0) == store.empty()
    for k in range(6):
        assert store.omega_upto(k) == store.numeral(k)
        assert fs(store, store.numeral(k)) == fs_numeral(k)


def test_rank(store):
    assert store.rank(store.empty()) == 0
    for n in range(7):
        assert store.rank(store.numeral(n)) == n


@given(trees())
def test_rank_strictly_increases_along_membership(t):
    s = Store()
    x = s.build(t)
    assert s.rank(x) == fs_rank(fs(s, x))
    assert all(s.rank(c) < s.rank(x) for c in s.members(x))


def _functions_oracle(a, b):
    """Function graphs a -> b found by filtering every subset of a x b."""
    cart = [fs_kpair(x, y) for x in a for y in b]
    out = set()
    for k in range(len(cart) + 1):
        for g in itertools.combinations(cart, k):
            firsts = [next(iter(min(p, key=len))) for p in g]
            if sorted(map(hash, firsts)) == sorted(map(hash, a)) and len(set(firsts)) == len(a):
                out.add(frozenset(g))
    return frozenset(out)


def test_exp_set(store):
    e = store.empty()
    b = store.numeral(2)
    assert store.exp_set(e, b) == store.singleton(e)
    assert store.exp_set(store.numeral(2), e) == e
    assert store.size(store.exp_set(store.numeral(2), store.numeral(3))) == 9


def test_exp_set_matches_subset_filter_oracle(V3):
    s = V3.store
    for a, b in itertools.product(V3.carrier, repeat=2):
        e = s.exp_set(a, b)
        assert fs(s, e) == _functions_oracle(fs(s, a), fs(s, b))
        assert all(s.is_function(g, a, b) for g in s.members(e))


def test_iter_omega(store):
    e = store.empty()
    chain, graph = store.iter_omega(lambda x: x, e, 3)
    assert chain == store.singleton(e)
    assert graph == store.intern(store.kpair(store.numeral(n), e) for n in range(3))
    chain, graph = store.iter_omega(store.successor, e, 4)
    assert chain == store.numeral(4)
    with pytest.raises(ValueError):
        store.iter_omega(store.successor, e, 0)


def test_iter_omega_graph_is_functional(V3):
    s = V3.store
    rng = random.Random(7)
    for _ in range(25):
        table = {x: rng.choice(V3.carrier) for x in V3.carrier}
        k = rng.randint(1, 6)
        c = rng.choice(V3.carrier)
        chain, graph = s.iter_omega(table.__getitem__, c, k)
        assert s.is_function(graph, s.omega_upto(k), chain)
        values = [s.apply(graph, s.numeral(n)) for n in range(k)]
        assert values[0] == c
        assert all(values[n + 1] == table[values[n]] for n in range(k - 1))


def test_transitive_closure(store):
    e = store.empty()
    one = store.singleton(e)
    assert store.transitive_closure(e) == e
    assert store.transitive_closure(store.singleton(one)) == store.pair(one, e)
    for n in range(6):
        assert store.transitive_closure(store.numeral(n)) == store.numeral(n)


def test_transitive_closure_minimal_in_v4(V4):
    s = V4.store
    transitive = [t for t in V4.carrier if s.is_transitive(t)]
    for x in V4.carrier:
        tc = s.transitive_closure(x)
        assert s.is_transitive(tc) and s.subset(x, tc)
        for t in transitive:
            if s.subset(x, t):
                assert s.subset(tc, t)


def _h_oracle(s, x, bound):
    """Saturate by enumerating actual functions b -> H with itertools.product."""
    H = set()
    while True:
        new = set(H)
        for b in s.members(x):
            for values in itertools.product(sorted(H), repeat=s.size(b)):
                img = s.intern(values)
                if s.rank(img) <= bound:
                    new.add(img)
        if new == H:
            return s.intern(H)
        H = new


def test_h_bounded(store):
    e = store.empty()
    assert store.h_bounded(e, 3) == e
    assert store.h_bounded(store.singleton(e), 2) == store.singleton(e)


def test_h_bounded_matches_function_oracle_and_is_monotone(V3):
    s = V3.store
    for x in V3.carrier:
        prev = None
        for k in range(4):
            h = s.h_bounded(x, k)
            assert h == _h_oracle(s, x, k)
            if prev is not None:
                assert s.subset(prev, h)
            prev = h


def test_h_bounded_budget():
    s = Store(StoreConfig(hbound_budget=3))
    with pytest.raises(ResourceLimitError):
        s.h_bounded(s.numeral(3), 3)


def test_resource_limits():
    s = Store(StoreConfig(max_powerset_base=3))
    with pytest.raises(ResourceLimitError):
        s.powerset(s.numeral(4))
    s = Store(StoreConfig(max_exp_size=8))
    with pytest.raises(ResourceLimitError):
        s.exp_set(s.numeral(2), s.numeral(3))
    s = Store(StoreConfig(max_nodes=10))
    with pytest.raises(ResourceLimitError):
        s.numeral(20)


def test_fragment_counts_match_iterated_powerset(store):
    from conftest import fs_fragment

    for n in range(5):
        v = store.fragment_set(n)
        assert fs(store, v) == fs_fragment(n)


def test_text_golden(store):
    assert store.text(store.empty()) == "{}"
    assert store.text(store.numeral(3)) == "{{},{{}},{{},{{}}}}"
    assert store.text(store.pair(store.numeral(2), store.singleton(store.numeral(1)))) == (
        "{{{{}}},{{},{{}}}}"
    )


@given(trees())
def test_text_round_trip(t):
    s = Store()
    x = s.build(t)
    assert s.from_text(s.text(x)) == x
    assert s.from_text(" ".join(s.text(x))) == x


def test_from_text_rejects_garbage(store):
    for bad in ["", "{", "{}}", "{{},}", "x"]:
        with pytest.raises(ValueError):
            store.from_text(bad)


@pytest.mark.parametrize("bits", [1, 2, 3])
def test_hash_collisions_do_not_break_canonical_form(bits):
    weak = Store(StoreConfig(hash_bits=bits))
    v4 = weak.members(weak.fragment_set(4))
    assert len(v4) == 16
    assert len({weak.text(s) for s in v4}) == 16
    # same sets interned in a different order land on the same text
    other = Store(StoreConfig(hash_bits=bits))
    rng = random.Random(bits)
    trees_ = [weak.tree(s) for s in v4]
    rng.shuffle(trees_)
    for t in trees_:
        assert other.text(other.build(t)) == weak.text(weak.build(t))
    for a, b in itertools.combinations(v4, 2):
        assert (weak.compare(a, b) < 0) == (weak.compare(b, a) > 0)


@given(trees(), st.randoms(use_true_random=False))
def test_canonical_text_independent_of_insertion_order(t, rng):
    a = Store()
    expected = a.text(a.build(t))
    b = Store()
    for junk in [((),), (((),),), ((), ((),))]:
        b.build(junk) if rng.random() < 0.5 else None
    assert b.text(b.build(t)) == expected


def test_members_equal_iff_ids_equal(V4):
    s = V4.store
    for x, y in itertools.product(V4.carrier, repeat=2):
        assert (set(s.members(x)) == set(s.members(y))) == (x == y)


def test_v5_has_65536_sets():
    s = Store()
    assert len(v_fragment(s, 5)) == 65536
    assert fs_rank(EMPTY) == 0
