"""Rotations, their elimination, and the rotation poset.

Element ids of a :class:`RotationPoset`: ``0`` is the dummy ``s``, ``1`` is
the dummy ``t``, and proper rotations follow from ``2`` in discovery order.
A closed set is an ``int`` bitset over these ids (see :mod:`robustmatch.order`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import BOYS, GIRLS, Instance, Matching, deferred_acceptance, boy_label
from .order import Poset, bits

S = 0
T = 1
FIRST_ROTATION = 2


class NotExposedError(ValueError):
    pass


class NotClosedError(ValueError):
    pass


class UnstableMatchingError(ValueError):
    pass


@dataclass(frozen=True)
class Rotation:
    """Cyclic list of ``(boy, girl)`` pairs, rotated so the smallest boy is first.

    Eliminating it moves boy ``b_i`` from ``g_i`` to ``g_{i+1}``.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(b), int(g)) for b, g in self.pairs)
        if len(pairs) < 2:
            raise ValueError("a rotation has at least two pairs")
        if len({b for b, _ in pairs}) != len(pairs) or len({g for _, g in pairs}) != len(pairs):
            raise ValueError("boys and girls in a rotation must be distinct")
        k = min(range(len(pairs)), key=lambda i: pairs[i][0])
        object.__setattr__(self, "pairs", pairs[k:] + pairs[:k])

    def __len__(self) -> int:
        return len(self.pairs)

    def moves(self) -> list[tuple[int, int, int]]:
        """``(boy, old girl, new girl)`` for every boy in the rotation."""
        r = len(self.pairs)
        return [(b, g, self.pairs[(i + 1) % r][1]) for i, (b, g) in enumerate(self.pairs)]

    def label(self, n: int) -> str:
        return "(" + ",".join(f"{boy_label(b, n)}{g + 1}" for b, g in self.pairs) + ")"


def _next_girl(inst: Instance, m: Matching, husband: list[int], b: int) -> int | None:
    """``s_M(b)``: first girl after b's partner who prefers b to her partner."""
    rank = inst.girl_rank
    prefs = inst.boy_prefs[b]
    for pos in range(int(inst.boy_rank[b, m[b]]) + 1, inst.n):
        g = prefs[pos]
        if rank[g, b] < rank[g, husband[g]]:
            return g
    return None


def exposed_rotations(inst: Instance, m: Matching) -> list[Rotation]:
    """All rotations exposed in the stable matching ``m``, sorted canonically."""
    n = inst.n
    husband = [0] * n
    for b, g in enumerate(m):
        husband[g] = b
    nxt: list[int | None] = []
    for b in range(n):
        g = _next_girl(inst, m, husband, b)
        nxt.append(None if g is None else husband[g])

    found = []
    state = [0] * n  # 0 unvisited, 1 on current walk, 2 done
    for start in range(n):
        walk = []
        b: int | None = start
        while b is not None and state[b] == 0:
            state[b] = 1
            walk.append(b)
            b = nxt[b]
        if b is not None and state[b] == 1:
            cycle = walk[walk.index(b):]
            found.append(Rotation(tuple((x, m[x]) for x in cycle)))
        for x in walk:
            state[x] = 2
    return sorted(found, key=lambda r: r.pairs)


def eliminate(m: Matching, rho: Rotation, inst: Instance | None = None) -> Matching:
    """``M / rho``.  With ``inst`` given, exposure is checked in full."""
    if any(m[b] != g for b, g in rho.pairs):
        raise NotExposedError(f"rotation {rho.pairs} is not contained in the matching")
    if inst is not None and rho not in exposed_rotations(inst, m):
        raise NotExposedError(f"rotation {rho.pairs} is not exposed in the matching")
    out = list(m)
    for b, _, new in rho.moves():
        out[b] = new
    return tuple(out)


class RotationPoset(Poset):
    """The rotation poset of an instance, with ``s = 0`` and ``t = 1``.

    Attributes beyond :class:`Poset`:

    ``rotations``  proper rotations; element id ``k`` is ``rotations[k - 2]``.
    ``move_to``    ``(boy, girl) -> id`` of the rotation moving the boy to the
                   girl, or ``s`` when they are paired in the boy-optimal matching.
    ``move_from``  ``(boy, girl) -> id`` of the rotation moving the boy away from
                   the girl, or ``t`` when paired in the girl-optimal matching.
    """

    def __init__(self, inst: Instance, m0: Matching, mz: Matching,
                 rotations: list[Rotation], edges: Iterable[tuple[int, int]]):
        self.n = inst.n
        self.m0 = m0
        self.mz = mz
        self.rotations = rotations
        self.generator_edges = sorted(set(edges))
        base = Poset.from_edges(len(rotations) + 2, S, T, self.generator_edges)
        super().__init__(base.size, S, T, base.below)

        self.move_to: dict[tuple[int, int], int] = {}
        self.move_from: dict[tuple[int, int], int] = {}
        for b, g in enumerate(m0):
            self.move_to[(b, g)] = S
        for b, g in enumerate(mz):
            self.move_from[(b, g)] = T
        # per boy, the chain of (rotation id, new girl) in elimination order
        self.boy_chain: list[list[tuple[int, int]]] = [[] for _ in range(inst.n)]
        for rid, rho in enumerate(rotations, start=FIRST_ROTATION):
            for b, old, new in rho.moves():
                self.move_from[(b, old)] = rid
                self.move_to[(b, new)] = rid
        for b in range(inst.n):
            g = m0[b]
            while (b, g) in self.move_from and self.move_from[(b, g)] != T:
                rid = self.move_from[(b, g)]
                g = self.rotation(rid).moves()[self._pos(rid, b)][2]
                self.boy_chain[b].append((rid, g))

    def _pos(self, rid: int, b: int) -> int:
        for i, (x, _) in enumerate(self.rotation(rid).pairs):
            if x == b:
                return i
        raise KeyError(b)

    def rotation(self, rid: int) -> Rotation:
        if rid < FIRST_ROTATION:
            raise KeyError(f"element {rid} is a dummy")
        return self.rotations[rid - FIRST_ROTATION]

    @property
    def proper_ids(self) -> range:
        return range(FIRST_ROTATION, self.size)

    def element_label(self, v: int) -> str:
        if v == S:
            return "s"
        if v == T:
            return "t"
        return f"r{v}"

    def format(self) -> str:
        """Text dump: one rotation per line, then Hasse edges as ``u -> v``."""
        lines = [f"{rid}: {self.rotation(rid).label(self.n)}" for rid in self.proper_ids]
        lines += [f"{u} -> {v}" for u, v in self.hasse_edges]
        return "\n".join(lines) + "\n"


def _girl_chains(m0: Matching, rotations: Sequence[Rotation], n: int) -> list[list[tuple[int, int]]]:
    """Per girl, ``(rotation id, new partner)`` in elimination order."""
    chains: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for rid, rho in enumerate(rotations, start=FIRST_ROTATION):
        r = len(rho.pairs)
        for i, (_, g) in enumerate(rho.pairs):
            chains[g].append((rid, rho.pairs[(i - 1) % r][0]))
    return chains


def build_rotation_poset(inst: Instance) -> RotationPoset:
    """Discover all rotations along one elimination chain and order them.

    Precedence is generated by two rules and then transitively closed:
    the rotation moving ``b`` to ``g`` precedes the one moving ``b`` away
    from ``g``; and when a rotation moves ``b`` from ``g_i`` past a girl
    ``g`` strictly between ``g_i`` and ``g_{i+1}`` on his list, the rotation
    that first gives ``g`` a partner she prefers to ``b`` precedes it.
    """
    n = inst.n
    m0 = deferred_acceptance(inst, BOYS)
    mz = deferred_acceptance(inst, GIRLS)

    ids: dict[Rotation, int] = {}
    rotations: list[Rotation] = []
    m = m0
    while True:
        exposed = exposed_rotations(inst, m)
        if not exposed:
            break
        for rho in exposed:
            if rho not in ids:
                ids[rho] = len(rotations) + FIRST_ROTATION
                rotations.append(rho)
        m = eliminate(m, min(exposed, key=ids.__getitem__))
    if m != mz:
        raise RuntimeError("elimination chain did not reach the girl-optimal matching")

    moved_to: dict[tuple[int, int], int] = {}
    for rid, rho in enumerate(rotations, start=FIRST_ROTATION):
        for b, _, new in rho.moves():
            moved_to[(b, new)] = rid

    girl_chains = _girl_chains(m0, rotations, n)
    husband0 = [0] * n
    for b, g in enumerate(m0):
        husband0[g] = b
    grank = inst.girl_rank

    def moves_above(g: int, b: int) -> int | None:
        # rotation after which g's partner is first someone she prefers to b
        cur = husband0[g]
        for rid, new in girl_chains[g]:
            if grank[g, cur] >= grank[g, b] > grank[g, new]:
                return rid
            cur = new
        return None

    edges = set()
    for rid, rho in enumerate(rotations, start=FIRST_ROTATION):
        for b, old, new in rho.moves():
            src = moved_to.get((b, old))
            if src is not None:
                edges.add((src, rid))
            prefs = inst.boy_prefs[b]
            for pos in range(int(inst.boy_rank[b, old]) + 1, int(inst.boy_rank[b, new])):
                pred = moves_above(prefs[pos], b)
                if pred is not None and pred != rid:
                    edges.add((pred, rid))
    return RotationPoset(inst, m0, mz, rotations, edges)


def matching_from_closed_set(poset: RotationPoset, inst: Instance | None, cs: int) -> Matching:
    """The stable matching generated by the proper closed set ``cs``."""
    if not poset.is_proper(cs):
        raise NotClosedError("not a proper closed set of the rotation poset")
    return _matching_of(poset, cs)


def _matching_of(poset: RotationPoset, cs: int) -> Matching:
    out = list(poset.m0)
    for b, chain in enumerate(poset.boy_chain):
        for rid, g in reversed(chain):
            if cs >> rid & 1:
                out[b] = g
                break
    return tuple(out)


def closed_set_from_matching(poset: RotationPoset, inst: Instance | None, m: Matching) -> int:
    """Inverse of :func:`matching_from_closed_set`."""
    cs = 1 << S
    for b, g in enumerate(m):
        if g == poset.m0[b]:
            continue
        chain = poset.boy_chain[b]
        for rid, new in chain:
            cs |= 1 << rid
            if new == g:
                break
        else:
            raise UnstableMatchingError(f"boy {b + 1} is never matched to girl {g + 1}")
    if not poset.is_proper(cs) or _matching_of(poset, cs) != tuple(m):
        raise UnstableMatchingError("matching is not stable for this instance")
    return cs


def closed_set_ids(cs: int) -> list[int]:
    return list(bits(cs))
