import itertools

import pytest
from hypothesis import settings, strategies as st

from hfsets import formula as fm
from hfsets.kernel import Store
from hfsets.semantics import v_fragment

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


# -- independent oracle: HF sets as nested frozensets -------------------

EMPTY = frozenset()


def fs(store, s):
    return frozenset(fs(store, c) for c in store.members(s))


def fs_powerset(x):
    items = list(x)
    return frozenset(
        frozenset(c) for k in range(len(items) + 1) for c in itertools.combinations(items, k)
    )


def fs_numeral(n):
    x = EMPTY
    for _ in range(n):
        x = x | {x}
    return x


def fs_kpair(x, y):
    return frozenset({frozenset({x}), frozenset({x, y})})


def fs_rank(x):
    return 1 + max((fs_rank(c) for c in x), default=-1) if x else 0


def fs_fragment(n):
    v = EMPTY
    for _ in range(n):
        v = fs_powerset(v)
    return v


# -- fixtures --------------------------------------------------------------


@pytest.fixture
def store():
    return Store()


@pytest.fixture(scope="session")
def shared():
    """One store holding V0..V4 for read-only tests."""
    s = Store()
    for n in range(5):
        v_fragment(s, n)
    return s


@pytest.fixture(scope="session")
def V3(shared):
    return v_fragment(shared, 3)


@pytest.fixture(scope="session")
def V4(shared):
    return v_fragment(shared, 4)


# -- strategies --------------------------------------------------------------


def trees(max_depth=4, max_branch=4):
    """Raw presentations: nested tuples, duplicates and any order allowed."""
    if max_depth == 0:
        return st.just(())
    sub = trees(max_depth - 1, max_branch)
    return st.one_of(st.just(()), st.lists(sub, max_size=max_branch).map(tuple))


def _terms(scope, free):
    opts = [fm.Free(n) for n in free] + [fm.Bound(i) for i in range(scope)]
    return st.sampled_from(opts)


@st.composite
def formulas(draw, depth=3, free=("a", "b"), scope=0, delta0=False):
    """Well-scoped ASTs; binder names are drawn so printing must rename on clashes."""
    term = _terms(scope, free)
    if depth == 0 or draw(st.integers(0, 4)) == 0:
        kind = draw(st.sampled_from(["in", "eq", "top", "bot"]))
        if kind == "top":
            return fm.TOP
        if kind == "bot":
            return fm.BOTTOM
        node = fm.Member if kind == "in" else fm.Equal
        return node(draw(term), draw(term))
    kind = draw(st.sampled_from(["not", "and", "or", "imp", "iff", "q", "bq"]))
    sub = lambda s=scope: formulas(depth - 1, free, s, delta0)  # noqa: E731
    if kind == "not":
        return fm.Not(draw(sub()))
    if kind in ("and", "or", "imp", "iff"):
        node = {"and": fm.And, "or": fm.Or, "imp": fm.Implies, "iff": fm.Iff}[kind]
        return node(draw(sub()), draw(sub()))
    name = draw(st.sampled_from(["x", "y", "a", "z"]))
    if kind == "q" and not delta0:
        node = draw(st.sampled_from([fm.Forall, fm.Exists]))
        return node(draw(sub(scope + 1)), name)
    node = draw(st.sampled_from([fm.BoundedForall, fm.BoundedExists]))
    return node(draw(term), draw(sub(scope + 1)), name)


# -- acceptance summary -----------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
