"""Compressions of a rotation poset and the sublattices they generate.

A compression partitions the poset elements into blocks (meta-rotations)
ordered by a DAG.  It is produced either by adding edges to the Hasse
diagram and shrinking strongly connected components (:func:`shrink`), or,
at desk scale, directly from an explicit sublattice
(:func:`compression_from_sublattice`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import networkx as nx

from .core import Instance, Matching
from .order import Poset, bits, mask_of
from .rotations import RotationPoset, closed_set_from_matching, matching_from_closed_set

Edge = tuple[int, int]
EdgeSet = list[Edge]


class NotASublatticeError(ValueError):
    pass


class DownSets(NamedTuple):
    I: int  # noqa: E741
    J: int
    I_up: int
    J_up: int


def down_sets(poset: Poset, v: int) -> DownSets:
    return DownSets(poset.I(v), poset.J(v), poset.I_up(v), poset.J_up(v))


def separates(cs: int, e: Edge) -> bool:
    """Head inside, tail outside."""
    u, v = e
    return bool(cs >> v & 1) and not cs >> u & 1


def crosses(cs: int, e: Edge) -> bool:
    """Tail inside, head outside."""
    u, v = e
    return bool(cs >> u & 1) and not cs >> v & 1


def separates_any(cs: int, edges: Iterable[Edge]) -> bool:
    return any(separates(cs, e) for e in edges)


@dataclass(frozen=True)
class MetaPoset:
    """Blocks of base elements (bitsets) plus a precedence DAG on block ids.

    ``dag_edges`` need be neither reduced nor transitively closed; the order
    they generate is :attr:`order`.  ``a_s`` and ``a_t`` are the blocks
    holding ``s`` and ``t``; when they coincide there is no proper closed set.
    """

    blocks: tuple[int, ...]
    dag_edges: tuple[Edge, ...]
    a_s: int
    a_t: int
    block_of: tuple[int, ...] = field(repr=False)

    @property
    def exists(self) -> bool:
        return self.a_s != self.a_t

    @cached_property
    def order(self) -> Poset:
        if not self.exists:
            raise ValueError("s and t share a block; the compression has no proper closed set")
        return Poset.from_edges(len(self.blocks), self.a_s, self.a_t, self.dag_edges)

    def hasse_edges(self) -> list[Edge]:
        return self.order.hasse_edges

    def expand(self, block_mask: int) -> int:
        """Union of the blocks in ``block_mask`` as a base-element bitset."""
        out = 0
        for k in bits(block_mask):
            out |= self.blocks[k]
        return out

    def format(self) -> str:
        lines = []
        for k, blk in enumerate(self.blocks):
            tag = " (A_s)" if k == self.a_s else " (A_t)" if k == self.a_t else ""
            lines.append(f"block {k}{tag}: " + " ".join(str(v) for v in bits(blk)))
        edges = self.hasse_edges() if self.exists else sorted(set(self.dag_edges))
        lines += [f"{u} -> {v}" for u, v in edges]
        return "\n".join(lines) + "\n"


def _make_meta(size: int, blocks: Sequence[int], edges: Iterable[Edge], s: int, t: int) -> MetaPoset:
    """Canonicalize: blocks sorted by smallest element, edges renumbered."""
    order = sorted(range(len(blocks)), key=lambda k: (blocks[k] & -blocks[k]).bit_length())
    renum = {old: new for new, old in enumerate(order)}
    new_blocks = tuple(blocks[k] for k in order)
    block_of = [0] * size
    for k, blk in enumerate(new_blocks):
        for v in bits(blk):
            block_of[v] = k
    dag = tuple(sorted({(renum[a], renum[b]) for a, b in edges if a != b}))
    return MetaPoset(new_blocks, dag, block_of[s], block_of[t], tuple(block_of))


def shrink(poset: Poset, E: Iterable[Edge]) -> MetaPoset:
    """Add ``E`` to the Hasse diagram and contract strongly connected components."""
    g = nx.DiGraph()
    g.add_nodes_from(range(poset.size))
    g.add_edges_from(poset.hasse_edges)
    for u, v in E:
        if not (0 <= u < poset.size and 0 <= v < poset.size):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside the poset")
        g.add_edge(u, v)
    cond = nx.condensation(g)
    blocks = [mask_of(cond.nodes[k]["members"]) for k in cond.nodes]
    return _make_meta(poset.size, blocks, cond.edges, poset.s, poset.t)


def closed_sets_of_meta(meta: MetaPoset) -> list[int]:
    """Every proper closed set of ``meta``, expanded to base-element bitsets."""
    if not meta.exists:
        return []
    return sorted(meta.expand(c) for c in meta.order.closed_sets())


def sublattice_from_edges(poset: RotationPoset, inst: Instance | None, E: Iterable[Edge]) -> set[Matching]:
    """Stable matchings whose closed sets separate no edge of ``E``."""
    meta = shrink(poset, E)
    return {matching_from_closed_set(poset, inst, c) for c in closed_sets_of_meta(meta)}


def edges_for_meta(meta: MetaPoset) -> EdgeSet:
    """An edge set whose :func:`shrink` reproduces ``meta``.

    Each block becomes a directed cycle through its elements and each DAG
    edge is realized between the smallest elements of its two blocks.
    """
    out: EdgeSet = []
    for blk in meta.blocks:
        members = list(bits(blk))
        if len(members) > 1:
            out += [(members[i], members[(i + 1) % len(members)]) for i in range(len(members))]
    for a, b in meta.dag_edges:
        out.append((min(bits(meta.blocks[a])), min(bits(meta.blocks[b]))))
    return out


def compression_from_sublattice(poset: RotationPoset, inst: Instance | None,
                                sub: Iterable[Matching]) -> MetaPoset:
    """Build the compression generating the explicit sublattice ``sub``.

    Blocks are the rotation sets between direct successors inside the
    sublattice, plus everything below its least element and everything above
    its greatest.  A block ``A`` is preceded by every other block inside the
    least member of ``sub`` whose closed set contains ``A``.
    """
    sets = sorted({closed_set_from_matching(poset, inst, m) for m in sub})
    if not sets:
        raise NotASublatticeError("the sublattice is empty")
    present = set(sets)
    for x in sets:
        for y in sets:
            if x | y not in present or x & y not in present:
                raise NotASublatticeError("subset is not closed under meet and join")

    low = min(sets, key=lambda c: bin(c).count("1"))
    high = max(sets, key=lambda c: bin(c).count("1"))
    a_s = low
    a_t = poset.full & ~high
    blocks = {a_s, a_t}
    for x in sets:
        ups = [y for y in sets if y != x and x & ~y == 0]
        for y in ups:
            if not any(z != y and x & ~z == 0 and z & ~y == 0 and z != x for z in ups):
                blocks.add(y & ~x)
    blocks_list = sorted(blocks)
    if sum(bin(b).count("1") for b in blocks_list) != poset.size or \
            mask_of(v for b in blocks_list for v in bits(b)) != poset.full:
        raise NotASublatticeError("direct-successor differences do not partition the poset")

    edges: list[Edge] = []
    for k, blk in enumerate(blocks_list):
        if blk == a_t:
            continue
        least = poset.full
        for c in sets:
            if blk & ~c == 0:
                least &= c
        for j, other in enumerate(blocks_list):
            if j != k and other & ~least == 0:
                edges.append((j, k))
    t_idx = blocks_list.index(a_t)
    edges += [(j, t_idx) for j in range(len(blocks_list)) if j != t_idx]
    return _make_meta(poset.size, blocks_list, edges, poset.s, poset.t)


def minimize_edges(poset: Poset, E: Iterable[Edge]) -> EdgeSet:
    """Drop edges that change nothing about the defined sublattice.

    An edge goes if no proper closed set separates it, or if every closed
    set separating it also separates another kept edge.  Edges with fewer
    separating sets are considered for removal first.  Enumerates closed
    sets, so desk scale only.
    """
    uniq: EdgeSet = []
    for e in E:
        if e not in uniq:
            uniq.append(e)
    live = [(u, v) for u, v in uniq if v != poset.t and u != v and not poset.J(v) >> u & 1]

    closed = list(poset.closed_sets())
    sep = [[c for c in closed if separates(c, e)] for e in live]
    count: dict[int, int] = {}
    for fam in sep:
        for c in fam:
            count[c] = count.get(c, 0) + 1
    keep = [True] * len(live)
    for i in sorted(range(len(live)), key=lambda i: (len(sep[i]), i)):
        if all(count[c] > 1 for c in sep[i]):
            keep[i] = False
            for c in sep[i]:
                count[c] -= 1
    return [e for e, k in zip(live, keep) if k]
