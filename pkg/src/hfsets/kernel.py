"""Interning store of hereditarily finite sets.

A set is presented by a finite family of children; many families denote the
same set.  The store keeps one canonical node per set: a duplicate-free child
tuple sorted by ``(rank, structural hash)`` with deep comparison breaking hash
ties.  Interning therefore *is* the bisimulation quotient, and id equality is
set equality.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

SetId = int

_MASK64 = (1 << 64) - 1
_EMPTY_HASH = 0x6A09E667F3BCC908


class ResourceLimitError(RuntimeError):
    """A configured store or construction limit would be exceeded."""


@dataclass(frozen=True)
class StoreConfig:
    max_nodes: int = 2_000_000
    max_powerset_base: int = 20
    max_exp_size: int = 1 << 16
    hbound_budget: int = 100_000
    # Fewer bits force hash collisions; used to exercise the deep comparison.
    hash_bits: int = 64


def _mix(h: int) -> int:
    # splitmix64 finalizer
    h = (h + 0x9E3779B97F4A7C15) & _MASK64
    h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & _MASK64
    return h ^ (h >> 31)


def bisim_naive(u: Sequence, v: Sequence) -> bool:
    """Mutual-inclusion bisimulation of two raw presentations.

    Presentations are nested sequences (``()`` is the empty set).  This is the
    literal two-sided recursion with no interning or memoisation; it is the
    oracle for :meth:`Store.build`.
    """
    return all(any(bisim_naive(a, b) for b in v) for a in u) and all(
        any(bisim_naive(a, b) for a in u) for b in v
    )


class Store:
    """Append-only hash-consing store.  Ids are never invalidated."""

    def __init__(self, config: StoreConfig | None = None):
        self.config = config or StoreConfig()
        self._hash_mask = (1 << self.config.hash_bits) - 1
        self._children: list[tuple[SetId, ...]] = []
        self._memsets: list[frozenset[SetId]] = []
        self._rank: list[int] = []
        self._hash: list[int] = []
        self._table: dict[tuple[SetId, ...], SetId] = {}
        self._text: dict[SetId, str] = {}
        self._fragments: dict[int, SetId] = {}
        self._sort_key = functools.cmp_to_key(self.compare)
        self.empty_id = self._intern_sorted(())

    def __len__(self) -> int:
        return len(self._children)

    # -- canonical order -------------------------------------------------

    def compare(self, a: SetId, b: SetId) -> int:
        """Total canonical order: rank, then hash, then children lexicographically."""
        if a == b:
            return 0
        ka = (self._rank[a], self._hash[a])
        kb = (self._rank[b], self._hash[b])
        if ka != kb:
            return -1 if ka < kb else 1
        for x, y in zip(self._children[a], self._children[b]):
            c = self.compare(x, y)
            if c:
                return c
        la, lb = len(self._children[a]), len(self._children[b])
        # Distinct canonical nodes never share a full child tuple.
        assert la != lb
        return -1 if la < lb else 1

    def _sorted(self, ids: Iterable[SetId]) -> tuple[SetId, ...]:
        uniq = set(ids)
        out = sorted(uniq, key=lambda i: (self._rank[i], self._hash[i]))
        for x, y in zip(out, out[1:]):
            if self._rank[x] == self._rank[y] and self._hash[x] == self._hash[y]:
                out.sort(key=self._sort_key)
                break
        return tuple(out)

    def sort_ids(self, ids: Iterable[SetId]) -> list[SetId]:
        return list(self._sorted(ids))

    # -- interning -------------------------------------------------------

    def _intern_sorted(self, children: tuple[SetId, ...]) -> SetId:
        found = self._table.get(children)
        if found is not None:
            return found
        if len(self._children) >= self.config.max_nodes:
            raise ResourceLimitError(
                f"store capacity of {self.config.max_nodes} nodes exceeded"
            )
        sid = len(self._children)
        h = _EMPTY_HASH
        for c in children:
            h = _mix(h ^ self._hash[c])
        self._children.append(children)
        self._memsets.append(frozenset(children))
        self._rank.append(1 + max(self._rank[c] for c in children) if children else 0)
        self._hash.append(h & self._hash_mask)
        self._table[children] = sid
        return sid

    def intern(self, children: Iterable[SetId]) -> SetId:
        """Canonical id of the set whose members are ``children``.

        Order and repetition in ``children`` are irrelevant.
        """
        children = list(children)
        n = len(self._children)
        for c in children:
            if not (isinstance(c, int) and 0 <= c < n):
                raise ValueError(f"invalid set id {c!r}")
        return self._intern_sorted(self._sorted(children))

    def build(self, tree: Sequence) -> SetId:
        """Intern a raw nested presentation such as ``((), ((),))``."""
        return self.intern(self.build(t) for t in tree)

    def tree(self, s: SetId) -> tuple:
        return tuple(self.tree(c) for c in self._children[s])

    # -- queries ---------------------------------------------------------

    def members(self, s: SetId) -> tuple[SetId, ...]:
        return self._children[s]

    def memset(self, s: SetId) -> frozenset[SetId]:
        return self._memsets[s]

    def mem(self, x: SetId, s: SetId) -> bool:
        return x in self._memsets[s]

    def subset(self, x: SetId, s: SetId) -> bool:
        return self._memsets[x] <= self._memsets[s]

    def rank(self, s: SetId) -> int:
        return self._rank[s]

    def structural_hash(self, s: SetId) -> int:
        return self._hash[s]

    def size(self, s: SetId) -> int:
        return len(self._children[s])

    def is_transitive(self, s: SetId) -> bool:
        ms = self._memsets[s]
        return all(self._memsets[c] <= ms for c in self._children[s])

    def ids(self) -> range:
        return range(len(self._children))

    # -- constructors ----------------------------------------------------

    def empty(self) -> SetId:
        return self.empty_id

    def singleton(self, x: SetId) -> SetId:
        return self._intern_sorted((x,))

    def pair(self, x: SetId, y: SetId) -> SetId:
        return self.intern((x, y))

    def kpair(self, x: SetId, y: SetId) -> SetId:
        """Kuratowski pair {{x},{x,y}}."""
        return self.pair(self.singleton(x), self.pair(x, y))

    def unpair(self, p: SetId) -> tuple[SetId, SetId] | None:
        """Inverse of :meth:`kpair`, or ``None`` if ``p`` is not a pair."""
        ms = self._children[p]
        if len(ms) == 1:
            (only,) = ms
            if len(self._children[only]) == 1:
                x = self._children[only][0]
                return (x, x)
            return None
        if len(ms) != 2:
            return None
        a, b = ms
        if len(self._children[a]) != 1:
            a, b = b, a
        if len(self._children[a]) != 1 or len(self._children[b]) != 2:
            return None
        (x,) = self._children[a]
        if x not in self._memsets[b]:
            return None
        (y,) = [c for c in self._children[b] if c != x]
        return (x, y)

    def union2(self, x: SetId, y: SetId) -> SetId:
        return self.intern(self._children[x] + self._children[y])

    def bigunion(self, x: SetId) -> SetId:
        return self.intern(itertools.chain.from_iterable(self._children[y] for y in self._children[x]))

    def successor(self, x: SetId) -> SetId:
        return self.union2(x, self.singleton(x))

    def separate(self, a: SetId, pred: Callable[[SetId], bool]) -> SetId:
        return self._intern_sorted(tuple(y for y in self._children[a] if pred(y)))

    def replace(self, r: Callable[[SetId], SetId], a: SetId) -> SetId:
        return self.intern(r(y) for y in self._children[a])

    def powerset(self, v: SetId) -> SetId:
        ms = self._children[v]
        if len(ms) > self.config.max_powerset_base:
            raise ResourceLimitError(
                f"powerset of a {len(ms)}-element set exceeds max_powerset_base="
                f"{self.config.max_powerset_base}"
            )
        if len(self._children) + (1 << len(ms)) > self.config.max_nodes:
            raise ResourceLimitError(f"powerset would exceed {self.config.max_nodes} nodes")
        subsets = []
        for k in range(len(ms) + 1):
            # combinations of a sorted tuple come out sorted
            for combo in itertools.combinations(ms, k):
                subsets.append(self._intern_sorted(combo))
        return self.intern(subsets)

    def numeral(self, n: int) -> SetId:
        if n < 0:
            raise ValueError("numerals are natural numbers")
        x = self.empty_id
        for _ in range(n):
            x = self.successor(x)
        return x

    def omega_upto(self, k: int) -> SetId:
        """The finite approximation {0, ..., k-1} of omega, i.e. numeral(k)."""
        nums = [self.empty_id]
        for _ in range(k - 1):
            nums.append(self.successor(nums[-1]))
        return self.intern(nums[:k])

    def is_function(self, g: SetId, a: SetId, b: SetId) -> bool:
        """Whether ``g`` is the graph of a total function from ``a`` to ``b``."""
        seen: dict[SetId, SetId] = {}
        bm = self._memsets[b]
        for p in self._children[g]:
            xy = self.unpair(p)
            if xy is None:
                return False
            x, y = xy
            if x not in self._memsets[a] or y not in bm:
                return False
            if seen.setdefault(x, y) != y:
                return False
        return len(seen) == len(self._children[a])

    def apply(self, g: SetId, x: SetId) -> SetId:
        """Value of the function graph ``g`` at ``x``."""
        for p in self._children[g]:
            xy = self.unpair(p)
            if xy is not None and xy[0] == x:
                return xy[1]
        raise KeyError(f"{self.text(x)} is not in the domain of {self.text(g)}")

    def exp_set(self, a: SetId, b: SetId) -> SetId:
        """All function graphs from ``a`` to ``b``, as sets of Kuratowski pairs."""
        dom, cod = self._children[a], self._children[b]
        count = len(cod) ** len(dom)
        if count > self.config.max_exp_size:
            raise ResourceLimitError(
                f"|b|^|a| = {count} exceeds max_exp_size={self.config.max_exp_size}"
            )
        graphs = []
        for values in itertools.product(cod, repeat=len(dom)):
            graphs.append(self.intern(self.kpair(x, y) for x, y in zip(dom, values)))
        return self.intern(graphs)

    def iter_omega(
        self, r: Callable[[SetId], SetId], c: SetId, k: int
    ) -> tuple[SetId, SetId]:
        """First ``k`` steps of f(0)=c, f(n+1)=r(f(n)).

        Returns ``(chain, graph)`` where chain is the set of values and graph
        the set of pairs <numeral(n), f(n)>.
        """
        if k < 1:
            raise ValueError("iter_omega needs k >= 1")
        values = [c]
        for _ in range(k - 1):
            values.append(r(values[-1]))
        nums = [self.empty_id]
        for _ in range(k - 1):
            nums.append(self.successor(nums[-1]))
        chain = self.intern(values)
        graph = self.intern(self.kpair(n, v) for n, v in zip(nums, values))
        return chain, graph

    def transitive_closure(self, x: SetId) -> SetId:
        t = x
        while True:
            nxt = self.union2(t, self.bigunion(t))
            if nxt == t:
                return t
            t = nxt

    def h_bounded(self, x: SetId, rank_bound: int) -> SetId:
        """Least set of rank <= ``rank_bound`` closed under images of maps b -> H, b in x.

        The image of a map from an n-element b into H is any subset of H with
        1..n elements (or the empty set when b is empty), so saturation
        enumerates those subsets directly.
        """
        sizes = {len(self._children[b]) for b in self._children[x]}
        if not sizes:
            return self.empty_id
        budget = self.config.hbound_budget
        found: set[SetId] = set()
        if 0 in sizes and rank_bound >= 0:
            found.add(self.empty_id)
        widest = max(sizes)
        while True:
            current = self._sorted(found)
            new = set()
            for k in range(1, min(widest, len(current)) + 1):
                for combo in itertools.combinations(current, k):
                    if 1 + self._rank[combo[-1]] > rank_bound:
                        continue
                    sid = self._intern_sorted(combo)
                    if sid not in found:
                        new.add(sid)
                        if len(found) + len(new) > budget:
                            raise ResourceLimitError(
                                f"h_bounded saturation exceeded budget of {budget} sets"
                            )
            if not new:
                return self._intern_sorted(current)
            found |= new

    # -- fragments -------------------------------------------------------

    def fragment_set(self, n: int) -> SetId:
        """The set V_n of all sets of rank < n (iterated powerset of the empty set)."""
        if n in self._fragments:
            return self._fragments[n]
        s = self.empty_id if n == 0 else self.powerset(self.fragment_set(n - 1))
        self._fragments[n] = s
        return s

    # -- text ------------------------------------------------------------

    def text(self, s: SetId) -> str:
        """Canonical nested-brace form, children in canonical order, no spaces."""
        out = self._text.get(s)
        if out is None:
            out = "{" + ",".join(self.text(c) for c in self._children[s]) + "}"
            self._text[s] = out
        return out

    def from_text(self, text: str) -> SetId:
        """Inverse of :meth:`text`; whitespace is ignored."""
        src = "".join(text.split())
        pos = 0

        def parse() -> SetId:
            nonlocal pos
            if pos >= len(src) or src[pos] != "{":
                raise ValueError(f"expected '{{' at offset {pos} in {text!r}")
            pos += 1
            kids = []
            if pos < len(src) and src[pos] == "}":
                pos += 1
                return self.empty_id
            while True:
                kids.append(parse())
                if pos < len(src) and src[pos] == ",":
                    pos += 1
                    continue
                if pos < len(src) and src[pos] == "}":
                    pos += 1
                    return self.intern(kids)
                raise ValueError(f"expected ',' or '}}' at offset {pos} in {text!r}")

        sid = parse()
        if pos != len(src):
            raise ValueError(f"trailing input at offset {pos} in {text!r}")
        return sid
