"""Fully robust stable matchings against single-list preference errors.

Each error permutes one agent's list.  The matchings stable under ``A`` and
under the perturbed instance form a sublattice whose complement is a
semi-sublattice, so a bouquet finds edges defining it; the union of those
edges over all errors defines the fully robust sublattice.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .bouquet import Bouquet, MembershipOracle, find_bouquet
from .compression import Edge, EdgeSet, MetaPoset, shrink
from .core import Instance, InstanceError, Matching, NotPermutationError, parse_agent
from .order import bits
from .rotations import RotationPoset, matching_from_closed_set

log = logging.getLogger(__name__)

BOY = "boy"
GIRL = "girl"


@dataclass(frozen=True)
class ErrorSpec:
    """Replace the list of one agent with ``new_list`` (0-based indices)."""

    side: str
    agent: int
    new_list: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.side not in (BOY, GIRL):
            raise ValueError(f"side must be {BOY!r} or {GIRL!r}")
        object.__setattr__(self, "new_list", tuple(self.new_list))
        n = len(self.new_list)
        if sorted(self.new_list) != list(range(n)):
            raise NotPermutationError(f"{self.side} {self.agent + 1}: new list is not a permutation")

    def format(self) -> str:
        if self.side == GIRL:
            tokens = [chr(ord("a") + b) if len(self.new_list) <= 26 else str(b + 1) for b in self.new_list]
        else:
            tokens = [str(g + 1) for g in self.new_list]
        return f"{self.side} {self.agent + 1}: " + " ".join(tokens)


def parse_errors(text: str, n: int) -> list[ErrorSpec]:
    """Parse lines like ``girl 1: c a b d`` or ``boy 3: 2 1 4 3``."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2 or parts[0].lower() not in (BOY, GIRL):
            raise InstanceError(f"line {lineno}: expected '<boy|girl> <agent>: <list>'")
        side = parts[0].lower()
        agent = parse_agent(parts[1], n)
        new = tuple(parse_agent(tok, n) for tok in rest.split())
        if len(new) != n or len(set(new)) != n:
            raise NotPermutationError(f"line {lineno}: list must be a permutation of {n} agents")
        out.append(ErrorSpec(side, agent, new))
    return out


def parse_weights(text: str, n: int) -> np.ndarray:
    """``n`` lines of ``n`` reals; row ``b`` holds the weights of boy ``b``."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InstanceError(f"weight file must be {n} lines of {n} numbers")
    w = np.array([[float(x) for x in r] for r in rows])
    if not np.isfinite(w).all():
        raise InstanceError("weights must be finite")
    return w


def apply_error(A: Instance, e: ErrorSpec) -> Instance:
    if len(e.new_list) != A.n:
        raise NotPermutationError(f"error list has {len(e.new_list)} entries, instance has n={A.n}")
    if e.side == BOY:
        return A.with_boy_list(e.agent, e.new_list)
    return A.with_girl_list(e.agent, e.new_list)


def is_identity(A: Instance, e: ErrorSpec) -> bool:
    current = A.boy_prefs[e.agent] if e.side == BOY else A.girl_prefs[e.agent]
    return tuple(current) == e.new_list


def stable_after_error(A: Instance, e: ErrorSpec, m: Matching) -> bool:
    """Stability under the perturbed instance of a matching stable under ``A``.

    Only pairs involving the perturbed agent can newly block.
    """
    n = A.n
    if e.side == GIRL:
        g = e.agent
        husband = m.index(g)
        for b in e.new_list:
            if b == husband:
                return True
            if A.boy_rank[b, g] < A.boy_rank[b, m[b]]:
                return False
        return True
    b = e.agent
    wife = m[b]
    husband = [0] * n
    for x, g in enumerate(m):
        husband[g] = x
    for g in e.new_list:
        if g == wife:
            return True
        if A.girl_rank[g, b] < A.girl_rank[g, husband[g]]:
            return False
    return True


def bouquet_for_error(poset: RotationPoset, A: Instance, e: ErrorSpec) -> Bouquet:
    """Girl errors leave a join-closed complement; boy errors a meet-closed
    one, handled on the dual poset."""
    oracle = MembershipOracle(poset, lambda m: stable_after_error(A, e, m), dual=e.side == BOY)
    return find_bouquet(poset, A, oracle)


def edges_for_error(poset: RotationPoset, A: Instance, e: ErrorSpec) -> EdgeSet:
    """Bouquet edges defining the matchings stable under ``A`` and ``A + e``."""
    if is_identity(A, e):
        return []
    return bouquet_for_error(poset, A, e).edges()


@dataclass
class RobustResult:
    meta: MetaPoset
    exists: bool
    witness: Matching | None
    errors: list[ErrorSpec]
    per_error_edges: list[EdgeSet]
    edges: EdgeSet = field(default_factory=list)


def _dedupe(A: Instance, errors: Iterable[ErrorSpec]) -> list[ErrorSpec]:
    seen: dict[ErrorSpec, None] = {}
    for e in errors:
        if not is_identity(A, e):
            seen.setdefault(e, None)
    return list(seen)


def _edges_job(args: tuple[RotationPoset, Instance, ErrorSpec]) -> EdgeSet:
    return edges_for_error(*args)


def build_robust(poset: RotationPoset, A: Instance, errors: Sequence[ErrorSpec], jobs: int = 1) -> RobustResult:
    """Compression generating all fully robust stable matchings."""
    uniq = _dedupe(A, errors)
    if jobs > 1 and len(uniq) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per = list(pool.map(_edges_job, [(poset, A, e) for e in uniq]))
    else:
        per = [edges_for_error(poset, A, e) for e in uniq]
    for e, E in zip(uniq, per):
        log.debug("%s -> %s", e.format(), E)
    union: list[Edge] = sorted({edge for E in per for edge in E})
    meta = shrink(poset, union)
    witness = None
    if meta.exists:
        witness = matching_from_closed_set(poset, A, meta.blocks[meta.a_s])
    return RobustResult(meta, meta.exists, witness, uniq, per, union)


def rotation_deltas(poset: RotationPoset, w: np.ndarray) -> dict[int, Fraction]:
    """Change in total pair weight caused by eliminating each rotation (exact)."""
    out = {}
    for rid in poset.proper_ids:
        out[rid] = sum((Fraction(float(w[b, new])) - Fraction(float(w[b, old]))
                        for b, old, new in poset.rotation(rid).moves()), Fraction(0))
    return out


def pair_anchors(meta: MetaPoset, poset: RotationPoset) -> dict[tuple[int, int], tuple[int, int]]:
    """For each pair in some stable matching, the blocks of the rotations moving
    the boy to and away from the girl (``s``/``t`` blocks when there is none)."""
    return {pair: (meta.block_of[poset.move_to[pair]], meta.block_of[poset.move_from[pair]])
            for pair in poset.move_to}


def matching_weight(m: Matching, w: np.ndarray) -> float:
    return float(sum(float(w[b, g]) for b, g in enumerate(m)))


def max_weight_robust(result: RobustResult, poset: RotationPoset, A: Instance,
                      w: np.ndarray, minimize: bool = False) -> tuple[Matching, float] | None:
    """Heaviest fully robust matching (lightest with ``minimize``).

    Block weights are sums of rotation weight deltas, so the total weight of
    a closed set is the weight of the boy-optimal matching plus the weights
    of its blocks.  The best closed set is the source side of a minimum cut;
    the residual-reachable side is the smallest optimum, which breaks ties
    toward the boys.
    """
    if not result.exists:
        return None
    w = np.asarray(w, dtype=float)
    sign = -1 if minimize else 1
    meta = result.meta
    delta = rotation_deltas(poset, w)
    g = nx.DiGraph()
    src, snk = "source", "sink"
    g.add_nodes_from([src, snk])
    for k, blk in enumerate(meta.blocks):
        g.add_node(k)
        wk = sign * sum((delta.get(v, Fraction(0)) for v in bits(blk)), Fraction(0))
        if k == meta.a_s:
            g.add_edge(src, k)
        elif k == meta.a_t:
            g.add_edge(k, snk)
        elif wk > 0:
            g.add_edge(src, k, capacity=wk)
        elif wk < 0:
            g.add_edge(k, snk, capacity=-wk)
    for x, y in meta.dag_edges:
        g.add_edge(y, x)  # taking y forces x
    _, (side, _) = nx.minimum_cut(g, src, snk)
    chosen = 0
    for k in side:
        if k != src:
            chosen |= meta.blocks[k]
    m = matching_from_closed_set(poset, A, chosen)
    return m, matching_weight(m, w)
