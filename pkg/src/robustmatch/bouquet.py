"""Finding a bouquet: an edge set defining a sublattice ``L1`` given only a
membership oracle, when the rest of the lattice ``L2`` is a join
semi-sublattice.

The algorithms run on a *working* poset.  For a meet semi-sublattice the
working poset is the dual of the rotation poset; closed sets of the dual are
complements of closed sets of the original, so joins there are meets here.
Bouquet edges are reported back in the original orientation by
:meth:`Bouquet.edges`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import Instance, Matching
from .order import Poset, bits, mask_of
from .rotations import RotationPoset, _matching_of

Edge = tuple[int, int]


class BouquetStructureError(RuntimeError):
    """The oracle's partition is not a sublattice plus a semi-sublattice."""


class NotSettingIError(ValueError):
    pass


class MembershipOracle:
    """Maps closed sets of the working poset to ``True`` (in ``L1``),
    ``False`` (in ``L2``) or ``None`` (not a proper closed set).

    Answers are cached by bitset; :attr:`calls` counts predicate evaluations.
    """

    def __init__(self, poset: RotationPoset, in_l1: Callable[[Matching], bool], dual: bool = False):
        self.base = poset
        self.in_l1 = in_l1
        self.dual = dual
        self.order: Poset = poset.dual() if dual else poset
        self.calls = 0
        self._cache: dict[int, bool | None] = {}

    def base_set(self, mask: int) -> int:
        return self.base.full & ~mask if self.dual else mask

    def matching(self, mask: int) -> Matching:
        return _matching_of(self.base, self.base_set(mask))

    def __call__(self, mask: int) -> bool | None:
        if mask in self._cache:
            return self._cache[mask]
        if not self.order.is_proper(mask):
            ans = None
        else:
            self.calls += 1
            ans = bool(self.in_l1(self.matching(mask)))
        self._cache[mask] = ans
        return ans


def as_oracle(poset: RotationPoset, oracle) -> MembershipOracle:
    return oracle if isinstance(oracle, MembershipOracle) else MembershipOracle(poset, oracle)


@dataclass(frozen=True)
class Flower:
    tail: int
    heads: tuple[int, ...]


@dataclass
class Bouquet:
    """Flowers in the order found (tails descending along a chain).

    ``splitting_sets[i]`` is the splitting set in force when flower ``i`` was
    found; ``trace`` holds per-round ``X``, ``Y``, ``V`` and ``S``.  All sets
    are bitsets of the working poset.
    """

    flowers: list[Flower]
    dual: bool = False
    splitting_sets: list[int] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)

    def working_edges(self) -> list[Edge]:
        return [(f.tail, h) for f in self.flowers for h in f.heads]

    def edges(self) -> list[Edge]:
        """Edges defining ``L1`` in the orientation of the rotation poset."""
        if self.dual:
            return [(h, r) for r, h in self.working_edges()]
        return self.working_edges()

    @property
    def tails(self) -> list[int]:
        return [f.tail for f in self.flowers]


def _tail_candidates(poset: Poset, S: int, oracle: MembershipOracle) -> list[int]:
    # Probes are taken inside S, not inside the whole poset: once a flower has
    # been removed from S, cutting above v in the whole poset can separate
    # that flower's edges and hide the next tail.
    return [v for v in bits(S)
            if oracle(S & ~poset.I_up(v)) is True and oracle(S & ~poset.J_up(v)) is False]


def _unique_max(poset: Poset, V: list[int]) -> int | None:
    top = poset.maximal(mask_of(V))
    return top[0] if len(top) == 1 else None


def find_next_tail(poset: Poset, S: int, oracle: MembershipOracle) -> int | None:
    """The maximal tail inside the splitting set ``S``, or ``None``."""
    V = _tail_candidates(poset, S, oracle)
    return _unique_max(poset, V) if V else None


def find_flower(poset: Poset, S: int, r: int, oracle: MembershipOracle,
                trace: dict | None = None) -> Flower:
    """Heads of all bouquet edges leaving the tail ``r``."""
    X = [v for v in bits(poset.I(r)) if oracle(poset.J(v)) is True]
    Y = 0
    for v in X:
        Y |= poset.J(v)
    if trace is not None:
        trace.update(tail=r, X=mask_of(X), Y=Y, S=S)
    if Y == 0 and oracle(1 << poset.s) is False:
        if trace is not None:
            trace["V"] = 1 << poset.s
        return Flower(r, (poset.s,))
    V = [v for v in bits(S)
         if oracle(Y | poset.I(v)) is True and oracle(Y | poset.J(v)) is False]
    if trace is not None:
        trace["V"] = mask_of(V)
    return Flower(r, tuple(V))


def _check_structure(poset: Poset, flowers: list[Flower]) -> None:
    tails = [f.tail for f in flowers]
    for a, b in zip(tails, tails[1:]):
        if not poset.precedes(b, a):
            raise BouquetStructureError(f"tails {a} and {b} do not form a descending chain")
    heads = {h for f in flowers for h in f.heads}
    if heads & set(tails):
        raise BouquetStructureError(f"path of length two through {sorted(heads & set(tails))}")
    for f in flowers:
        for i, u in enumerate(f.heads):
            for v in f.heads[i + 1:]:
                if poset.comparable(u, v):
                    raise BouquetStructureError(
                        f"heads {u} and {v} of flower at {f.tail} are comparable")


def find_bouquet(poset: RotationPoset, inst: Instance | None, oracle) -> Bouquet:
    """Edges defining ``L1``, organized as flowers.

    ``oracle`` is a :class:`MembershipOracle` or a plain predicate on
    matchings (then ``L2`` must be join-closed in the rotation poset).
    """
    oracle = as_oracle(poset, oracle)
    work = oracle.order
    S = work.full
    flowers: list[Flower] = []
    splits: list[int] = []
    trace: list[dict] = []

    def next_tail(S: int) -> int | None:
        V = _tail_candidates(work, S, oracle)
        if not V:
            return None
        r = _unique_max(work, V)
        if r is None:
            raise BouquetStructureError(
                f"tail candidates {V} inside splitting set {bin(S)} have no unique maximum")
        return r

    r = next_tail(S) if oracle(work.full & ~(1 << work.t)) else work.t
    while r is not None:
        info: dict = {}
        flower = find_flower(work, S, r, oracle, info)
        if not flower.heads:
            raise BouquetStructureError(
                f"tail {r} has an empty flower (X={bin(info['X'])}, Y={bin(info['Y'])})")
        flowers.append(flower)
        splits.append(S)
        trace.append(info)
        gone = 0
        for u in flower.heads + (r,):
            gone |= work.J_up(u)
        S &= ~gone
        if not work.is_closed(S):
            raise BouquetStructureError(f"updated splitting set {bin(S)} is not closed")
        r = next_tail(S)
    _check_structure(work, flowers)
    return Bouquet(flowers, oracle.dual, splits, trace)


def canonical_path(poset: RotationPoset, inst: Instance | None, oracle) -> list[int]:
    """Alternating-path rotations ``r_0, r_1, ..., r_{2k+1}`` for a partition
    into two sublattices.

    A proper closed set generates a matching of ``L1`` iff it contains some
    ``r_{2i}`` but not ``r_{2i+1}``.  Empty when ``L1`` is everything.
    """
    oracle = as_oracle(poset, oracle)
    if oracle.dual:
        raise NotSettingIError("canonical paths are computed on the rotation poset orientation")
    bq = find_bouquet(poset, inst, oracle)
    if not bq.flowers:
        return []
    if any(len(f.heads) != 1 for f in bq.flowers):
        raise NotSettingIError("a flower has several heads; L2 is not a sublattice")
    work = oracle.order
    # descending chain t = p_0 > p_1 > ... > p_m = s; bouquet edges are the
    # ones from a tail to its head, the others are the complementary side
    path = [work.t]
    for f in bq.flowers:
        if f.tail != path[-1]:
            path.append(f.tail)
        path.append(f.heads[0])
    if path[-1] != work.s:
        path.append(work.s)
    bouquet_edges = set(bq.working_edges())
    out = []
    for a, b in zip(path, path[1:]):
        if (a, b) not in bouquet_edges:
            out += [b, a]
    return out


def in_first_part(path: list[int], cs: int) -> bool:
    """Membership predicate for a canonical path (see :func:`canonical_path`)."""
    if not path:
        return True
    return any(cs >> path[i] & 1 and not cs >> path[i + 1] & 1 for i in range(0, len(path), 2))
