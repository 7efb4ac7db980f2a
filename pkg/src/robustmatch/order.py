"""Finite posets with two dummy elements, stored as bitsets.

Every subset of elements is a Python ``int`` with bit ``v`` set for element
``v``.  ``s`` precedes every other element and ``t`` succeeds every other
element.  A proper closed set contains ``s``, excludes ``t`` and is closed
downward.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator


class CycleError(ValueError):
    """Precedence edges do not form a DAG."""


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for v in items:
        m |= 1 << v
    return m


class Poset:
    """A poset on ``0..size-1`` with least element ``s`` and greatest ``t``.

    ``below[v]`` is the bitset of strict predecessors of ``v``.  Construction
    via :meth:`from_edges` adds the ``s``/``t`` relations and takes the
    transitive closure.
    """

    def __init__(self, size: int, s: int, t: int, below: list[int]):
        self.size = size
        self.s = s
        self.t = t
        self.below = list(below)
        above = [0] * size
        for v in range(size):
            for u in bits(below[v]):
                above[u] |= 1 << v
        self.above = above
        self.full = (1 << size) - 1

    @classmethod
    def from_edges(cls, size: int, s: int, t: int, edges: Iterable[tuple[int, int]]) -> Poset:
        succ: list[set[int]] = [set() for _ in range(size)]
        for u, v in edges:
            if u != v:
                succ[u].add(v)
        for v in range(size):
            if v != s:
                succ[s].add(v)
            if v != t:
                succ[v].add(t)
        order = _toposort(size, succ)
        below = [0] * size
        for u in order:
            for v in succ[u]:
                below[v] |= below[u] | (1 << u)
        return cls(size, s, t, below)

    # -- relations -------------------------------------------------------

    def precedes(self, u: int, v: int) -> bool:
        """Strict precedence ``u < v``."""
        return bool(self.below[v] >> u & 1)

    def comparable(self, u: int, v: int) -> bool:
        return u == v or self.precedes(u, v) or self.precedes(v, u)

    def I(self, v: int) -> int:  # noqa: E743
        """Strict predecessors of ``v``."""
        return self.below[v]

    def J(self, v: int) -> int:
        """``v`` and its predecessors."""
        return self.below[v] | (1 << v)

    def I_up(self, v: int) -> int:
        """Strict successors of ``v``."""
        return self.above[v]

    def J_up(self, v: int) -> int:
        return self.above[v] | (1 << v)

    def is_closed(self, mask: int) -> bool:
        return all(self.below[v] & ~mask == 0 for v in bits(mask))

    def is_proper(self, mask: int) -> bool:
        return bool(mask >> self.s & 1) and not mask >> self.t & 1 and self.is_closed(mask)

    def down_closure(self, mask: int) -> int:
        out = mask
        for v in bits(mask):
            out |= self.below[v]
        return out

    def maximal(self, mask: int) -> list[int]:
        """Elements of ``mask`` with no strict successor inside ``mask``."""
        return [v for v in bits(mask) if self.above[v] & mask == 0]

    # -- derived structure -----------------------------------------------

    @cached_property
    def topological_order(self) -> list[int]:
        return sorted(range(self.size), key=lambda v: (bin(self.below[v]).count("1"), v))

    @cached_property
    def hasse_edges(self) -> list[tuple[int, int]]:
        """Covering pairs ``(u, v)``, sorted."""
        edges = []
        for v in range(self.size):
            preds = self.below[v]
            implied = 0
            for u in bits(preds):
                implied |= self.below[u]
            for u in bits(preds & ~implied):
                edges.append((u, v))
        return sorted(edges)

    def relations(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.size) for u in bits(self.below[v])]

    def dual(self) -> Poset:
        """The reversed order; ``s`` and ``t`` swap roles."""
        return Poset(self.size, self.t, self.s, self.above)

    def closed_sets(self) -> Iterator[int]:
        """Enumerate every proper closed set (exponential; desk scale)."""
        order = [v for v in self.topological_order if v not in (self.s, self.t)]
        below = self.below
        start = 1 << self.s

        def rec(i: int, mask: int) -> Iterator[int]:
            if i == len(order):
                yield mask
                return
            v = order[i]
            yield from rec(i + 1, mask)
            if below[v] & ~mask == 0:
                yield from rec(i + 1, mask | (1 << v))

        yield from rec(0, start)


def _toposort(size: int, succ: list[set[int]]) -> list[int]:
    indeg = [0] * size
    for u in range(size):
        for v in succ[u]:
            indeg[v] += 1
    ready = [v for v in range(size) if indeg[v] == 0]
    out = []
    while ready:
        u = ready.pop()
        out.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    if len(out) != size:
        raise CycleError("precedence relation contains a cycle")
    return out
