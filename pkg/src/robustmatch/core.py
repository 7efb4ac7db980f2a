"""Stable marriage instances, stability checks and the lattice operations.

Agents are 0-based internally.  Boys are ``0..n-1`` and girls are ``0..n-1``;
a matching is a tuple ``partner_of_boy`` with one girl index per boy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

Matching = tuple[int, ...]

BOYS = "boys"
GIRLS = "girls"


class InstanceError(ValueError):
    """Raised for malformed instance input."""


class LineCountError(InstanceError):
    pass


class NotPermutationError(InstanceError):
    pass


class IndexRangeError(InstanceError):
    pass


class NotAMatchingError(ValueError):
    """A lattice operation produced something that is not a perfect matching."""


class BlockingPair(NamedTuple):
    boy: int
    girl: int


def _check_lists(lists: Sequence[Sequence[int]], n: int, side: str) -> None:
    if len(lists) != n:
        raise LineCountError(f"expected {n} {side} lists, got {len(lists)}")
    for i, row in enumerate(lists):
        if len(row) != n:
            raise NotPermutationError(
                f"{side} list {i + 1} has {len(row)} entries, expected {n}")
        for x in row:
            if not 0 <= x < n:
                raise IndexRangeError(f"{side} list {i + 1}: index {x + 1} out of range 1..{n}")
        if len(set(row)) != n:
            raise NotPermutationError(f"{side} list {i + 1} has a duplicate entry")


@dataclass(frozen=True)
class Instance:
    """A complete, strict preference profile for ``n`` boys and ``n`` girls."""

    n: int
    boy_prefs: tuple[tuple[int, ...], ...]
    girl_prefs: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InstanceError("n must be positive")
        object.__setattr__(self, "boy_prefs", tuple(tuple(r) for r in self.boy_prefs))
        object.__setattr__(self, "girl_prefs", tuple(tuple(r) for r in self.girl_prefs))
        _check_lists(self.boy_prefs, self.n, "boy")
        _check_lists(self.girl_prefs, self.n, "girl")

    @cached_property
    def boy_rank(self) -> np.ndarray:
        """``boy_rank[b, g]`` is the position of girl ``g`` in boy ``b``'s list."""
        return _ranks(self.boy_prefs, self.n)

    @cached_property
    def girl_rank(self) -> np.ndarray:
        return _ranks(self.girl_prefs, self.n)

    def with_boy_list(self, boy: int, prefs: Sequence[int]) -> Instance:
        rows = list(self.boy_prefs)
        rows[boy] = tuple(prefs)
        return Instance(self.n, tuple(rows), self.girl_prefs)

    def with_girl_list(self, girl: int, prefs: Sequence[int]) -> Instance:
        rows = list(self.girl_prefs)
        rows[girl] = tuple(prefs)
        return Instance(self.n, self.boy_prefs, tuple(rows))

    def swapped(self) -> Instance:
        """The same market with the roles of boys and girls exchanged."""
        return Instance(self.n, self.girl_prefs, self.boy_prefs)


def _ranks(prefs: Sequence[Sequence[int]], n: int) -> np.ndarray:
    rank = np.empty((n, n), dtype=np.int64)
    for a, row in enumerate(prefs):
        rank[a, list(row)] = np.arange(n)
    return rank


# ---------------------------------------------------------------------------
# Text formats


def parse_agent(token: str, n: int) -> int:
    """Parse a 1-based agent token; letters ``a..z`` stand for ``1..26``."""
    token = token.strip().rstrip(",")
    if token.isdigit():
        idx = int(token) - 1
    elif len(token) == 1 and token.isalpha():
        idx = ord(token.lower()) - ord("a")
    else:
        raise InstanceError(f"bad agent token {token!r}")
    if not 0 <= idx < n:
        raise IndexRangeError(f"agent {token!r} out of range 1..{n}")
    return idx


def _content_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    return lines


def parse_instance(text: str | bytes) -> Instance:
    """Parse the instance text format.

    Line 1 holds ``n``; the next ``n`` lines are the boys' lists and the
    following ``n`` lines the girls' lists, most preferred first.  Blank lines
    and lines starting with ``#`` are ignored.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = _content_lines(text)
    if not lines:
        raise LineCountError("empty instance file")
    try:
        n = int(lines[0])
    except ValueError:
        raise InstanceError(f"first line must be n, got {lines[0]!r}") from None
    if n < 1:
        raise InstanceError("n must be positive")
    if len(lines) != 2 * n + 1:
        raise LineCountError(f"expected {2 * n} preference lines, got {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:]):
        tokens = line.split()
        side = "boy" if i < n else "girl"
        agent = i % n + 1
        if len(tokens) != n:
            raise NotPermutationError(f"{side} {agent}: expected {n} entries, got {len(tokens)}")
        row = tuple(parse_agent(tok, n) for tok in tokens)
        if len(set(row)) != n:
            raise NotPermutationError(f"{side} {agent}: duplicate entry in list")
        rows.append(row)
    return Instance(n, tuple(rows[:n]), tuple(rows[n:]))


def boy_label(b: int, n: int) -> str:
    return chr(ord("a") + b) if n <= 26 else str(b + 1)


def format_instance(inst: Instance) -> str:
    """Render ``inst`` in the instance file format (numeric labels)."""
    out = [str(inst.n)]
    out += [" ".join(str(g + 1) for g in row) for row in inst.boy_prefs]
    out += [" ".join(str(b + 1) for b in row) for row in inst.girl_prefs]
    return "\n".join(out) + "\n"


def format_matching(m: Matching) -> str:
    """``{a1,b2,...}`` for up to 26 agents, ``{1:1,2:2,...}`` beyond."""
    n = len(m)
    if n <= 26:
        return "{" + ",".join(f"{boy_label(b, n)}{g + 1}" for b, g in enumerate(m)) + "}"
    return "{" + ",".join(f"{b + 1}:{g + 1}" for b, g in enumerate(m)) + "}"


def matching_from_pairs(pairs: dict[int, int] | Sequence[tuple[int, int]], n: int) -> Matching:
    """Build a matching from ``(boy, girl)`` pairs."""
    items = pairs.items() if isinstance(pairs, dict) else pairs
    m = [-1] * n
    for b, g in items:
        m[b] = g
    if sorted(m) != list(range(n)):
        raise NotAMatchingError(f"pairs {list(items)} do not form a perfect matching")
    return tuple(m)


# ---------------------------------------------------------------------------
# Stability


def _girl_partners(m: Matching) -> np.ndarray:
    part = np.empty(len(m), dtype=np.int64)
    part[list(m)] = np.arange(len(m))
    return part


def blocking_mask(inst: Instance, m: Matching) -> np.ndarray:
    """Boolean ``n x n`` matrix marking every blocking pair ``(b, g)``."""
    mm = np.asarray(m, dtype=np.int64)
    idx = np.arange(inst.n)
    boy_cur = inst.boy_rank[idx, mm]
    husband = _girl_partners(m)
    girl_cur = inst.girl_rank[idx, husband]
    return (inst.boy_rank < boy_cur[:, None]) & (inst.girl_rank.T < girl_cur[None, :])


def blocking_pairs(inst: Instance, m: Matching) -> list[BlockingPair]:
    """All blocking pairs of ``m`` under ``inst``, sorted by boy then girl."""
    bs, gs = np.nonzero(blocking_mask(inst, m))
    return [BlockingPair(int(b), int(g)) for b, g in zip(bs, gs)]


def is_stable(inst: Instance, m: Matching) -> bool:
    return not blocking_mask(inst, m).any()


def deferred_acceptance(inst: Instance, proposing_side: str = BOYS) -> Matching:
    """Gale-Shapley with a proposal queue.

    Returns the boy-optimal matching when boys propose and the girl-optimal
    one when girls propose; always as ``partner_of_boy``.
    """
    if proposing_side not in (BOYS, GIRLS):
        raise ValueError(f"proposing_side must be {BOYS!r} or {GIRLS!r}")
    if proposing_side == GIRLS:
        flipped = deferred_acceptance(inst.swapped(), BOYS)
        return tuple(int(x) for x in _girl_partners(flipped))

    n = inst.n
    rank = inst.girl_rank
    nxt = [0] * n
    engaged_to = [-1] * n  # girl -> boy
    free = list(range(n - 1, -1, -1))
    while free:
        b = free.pop()
        g = inst.boy_prefs[b][nxt[b]]
        nxt[b] += 1
        cur = engaged_to[g]
        if cur < 0:
            engaged_to[g] = b
        elif rank[g, b] < rank[g, cur]:
            engaged_to[g] = b
            free.append(cur)
        else:
            free.append(b)
    m = [0] * n
    for g, b in enumerate(engaged_to):
        m[b] = g
    return tuple(m)


# ---------------------------------------------------------------------------
# Lattice operations


def _pick(inst: Instance, m1: Matching, m2: Matching, better: bool) -> Matching:
    rank = inst.boy_rank
    out = []
    for b, (g1, g2) in enumerate(zip(m1, m2)):
        first = rank[b, g1] <= rank[b, g2]
        out.append(g1 if first == better else g2)
    res = tuple(out)
    if len(set(res)) != len(res):
        raise NotAMatchingError("inputs are not both stable matchings of the instance")
    return res


def meet(inst: Instance, m1: Matching, m2: Matching) -> Matching:
    """Each boy takes the partner he prefers."""
    return _pick(inst, m1, m2, better=True)


def join(inst: Instance, m1: Matching, m2: Matching) -> Matching:
    """Each boy takes the partner he likes less."""
    return _pick(inst, m1, m2, better=False)


def dominates(inst: Instance, m1: Matching, m2: Matching) -> bool:
    """True iff every boy weakly prefers his ``m1`` partner to his ``m2`` partner."""
    rank = inst.boy_rank
    return all(rank[b, g1] <= rank[b, g2] for b, (g1, g2) in enumerate(zip(m1, m2)))
