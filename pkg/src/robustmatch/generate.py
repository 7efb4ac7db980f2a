"""Seeded instance generators.

Randomness comes from ``numpy.random.Generator(PCG64(seed))``, so output is
a pure function of ``(n, seed, mode)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Instance

UNIFORM = "uniform-random"
MASTER = "master-list"
ADVERSARIAL = "adversarial-swap"
MODES = (UNIFORM, MASTER, ADVERSARIAL)


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    seed: int = 0
    mode: str = UNIFORM

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _groups(n: int, size: int = 3) -> list[list[int]]:
    groups = [list(range(i, min(i + size, n))) for i in range(0, n, size)]
    if len(groups) > 1 and len(groups[-1]) == 1:
        last = groups.pop()
        groups[-1] += last
    return groups


def _cyclic_blocks(n: int) -> tuple[list[list[int]], list[list[int]]]:
    """Disjoint cyclic markets of size about 3; each block of size k contributes
    k stable matchings and the lattice is their product."""
    boys: list[list[int]] = [[] for _ in range(n)]
    girls: list[list[int]] = [[] for _ in range(n)]
    for grp in _groups(n):
        k = len(grp)
        others = [a for a in range(n) if a not in grp]
        for pos, a in enumerate(grp):
            boys[a] = [grp[(pos + j) % k] for j in range(k)] + others
            girls[a] = [grp[(pos + 1 + j) % k] for j in range(k)] + others
    return boys, girls


def generate(cfg: GeneratorConfig) -> Instance:
    """Instance for ``cfg``.

    ``uniform-random``: every list an independent uniform permutation.
    ``master-list``: all boys share one list and all girls share one, so
    there is exactly one stable matching.
    ``adversarial-swap``: disjoint cyclic Latin-square markets (product
    lattice, many incomparable rotations) with agents relabeled at random.
    """
    n = cfg.n
    rng = _rng(cfg.seed)
    if cfg.mode == UNIFORM:
        boys = [rng.permutation(n).tolist() for _ in range(n)]
        girls = [rng.permutation(n).tolist() for _ in range(n)]
    elif cfg.mode == MASTER:
        bl = rng.permutation(n).tolist()
        gl = rng.permutation(n).tolist()
        boys = [list(bl) for _ in range(n)]
        girls = [list(gl) for _ in range(n)]
    else:
        cb, cg = _cyclic_blocks(n)
        pb = rng.permutation(n).tolist()  # new label of boy b
        pg = rng.permutation(n).tolist()
        boys = [[] for _ in range(n)]
        girls = [[] for _ in range(n)]
        for b in range(n):
            boys[pb[b]] = [pg[g] for g in cb[b]]
        for g in range(n):
            girls[pg[g]] = [pb[b] for b in cg[g]]
    return Instance(n, tuple(map(tuple, boys)), tuple(map(tuple, girls)))
