"""Brute-force ground truth: exhaustive enumeration over all perfect matchings.

Deliberately naive.  Nothing in here uses rotations, so property tests can
check the rotation machinery against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, Iterable

import numpy as np

from .core import Instance, Matching, dominates, is_stable, join, meet

DEFAULT_BOUND = 8


class BoundExceededError(ValueError):
    pass


@dataclass(frozen=True)
class LatticeSnapshot:
    inst: Instance
    matchings: tuple[Matching, ...]
    dominance: np.ndarray  # dominance[i, j]: matchings[i] dominates matchings[j]

    @property
    def top(self) -> Matching:
        """The matching dominating all others (boy-optimal)."""
        col = self.dominance.all(axis=1)
        return self.matchings[int(np.flatnonzero(col)[0])]

    @property
    def bottom(self) -> Matching:
        row = self.dominance.all(axis=0)
        return self.matchings[int(np.flatnonzero(row)[0])]

    def __len__(self) -> int:
        return len(self.matchings)


def _check_bound(n: int, bound: int) -> None:
    if n > bound:
        raise BoundExceededError(f"n={n} exceeds exhaustive bound {bound}")


def stable_permutations(inst: Instance) -> list[Matching]:
    """Every stable matching, by backtracking over all ``n!`` assignments.

    A partial assignment is abandoned as soon as two of its pairs block each
    other, which is exact because blocking is a property of two pairs.
    """
    n = inst.n
    br = inst.boy_rank.tolist()
    gr = inst.girl_rank.tolist()
    out: list[Matching] = []
    cur: list[int] = []
    used = [False] * n

    def rec(b: int) -> None:
        if b == n:
            out.append(tuple(cur))
            return
        for g in range(n):
            if used[g]:
                continue
            ok = True
            for b2, g2 in enumerate(cur):
                if br[b][g2] < br[b][g] and gr[g2][b] < gr[g2][b2]:
                    ok = False
                    break
                if br[b2][g] < br[b2][g2] and gr[g][b2] < gr[g][b]:
                    ok = False
                    break
            if ok:
                used[g] = True
                cur.append(g)
                rec(b + 1)
                cur.pop()
                used[g] = False

    rec(0)
    return out


def enumerate_stable(inst: Instance, bound: int = DEFAULT_BOUND) -> LatticeSnapshot:
    """All stable matchings by exhaustive search, plus the dominance matrix."""
    _check_bound(inst.n, bound)
    found = tuple(stable_permutations(inst))
    k = len(found)
    dom = np.zeros((k, k), dtype=bool)
    for i, a in enumerate(found):
        for j, b in enumerate(found):
            dom[i, j] = dominates(inst, a, b)
    return LatticeSnapshot(inst, found, dom)


def _closed(snapshot: LatticeSnapshot, subset: Iterable[Matching], op) -> bool:
    sub = set(subset)
    return all(op(snapshot.inst, a, b) in sub for a in sub for b in sub)


def is_join_semi(snapshot: LatticeSnapshot, subset: Collection[Matching]) -> bool:
    return _closed(snapshot, subset, join)


def is_meet_semi(snapshot: LatticeSnapshot, subset: Collection[Matching]) -> bool:
    return _closed(snapshot, subset, meet)


def is_sublattice(snapshot: LatticeSnapshot, subset: Collection[Matching]) -> bool:
    return is_join_semi(snapshot, subset) and is_meet_semi(snapshot, subset)


def brute_force_robust(A: Instance, errors: Iterable, bound: int = DEFAULT_BOUND) -> set[Matching]:
    """Stable matchings of ``A`` that stay stable under every single error."""
    from .robust import apply_error

    _check_bound(A.n, bound)
    instances = [apply_error(A, e) for e in errors]
    return {p for p in stable_permutations(A) if all(is_stable(B, p) for B in instances)}
