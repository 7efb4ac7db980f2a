from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from robustmatch.core import Instance, matching_from_pairs, parse_instance
from robustmatch.generate import ADVERSARIAL, GeneratorConfig, generate
from robustmatch.robust import ErrorSpec

DATA = Path(__file__).parent / "data"


def M(text: str, n: int = 4):
    """Matching from tokens like ``1a`` or ``a1`` (girl number, boy letter)."""
    pairs = []
    for tok in text.replace("{", "").replace("}", "").split(","):
        tok = tok.strip()
        if tok[0].isdigit():
            g, b = tok[:-1], tok[-1]
        else:
            b, g = tok[0], tok[1:]
        pairs.append((ord(b) - ord("a"), int(g) - 1))
    return matching_from_pairs(pairs, n)


@pytest.fixture
def demo_A() -> Instance:
    return parse_instance((DATA / "demo_A.txt").read_text())


@pytest.fixture
def demo_B() -> Instance:
    return parse_instance((DATA / "demo_B.txt").read_text())


@pytest.fixture
def demo_error() -> ErrorSpec:
    # girl 1: b a c d -> c a b d
    return ErrorSpec("girl", 0, (2, 0, 1, 3))


def random_instance(rng: random.Random, n: int) -> Instance:
    boys = tuple(tuple(rng.sample(range(n), n)) for _ in range(n))
    girls = tuple(tuple(rng.sample(range(n), n)) for _ in range(n))
    return Instance(n, boys, girls)


def rich_instance(rng: random.Random, n: int, swaps: int = 3) -> Instance:
    """Cyclic-block instance with a few adjacent swaps; many stable matchings."""
    A = generate(GeneratorConfig(n, rng.randrange(2**32), ADVERSARIAL))
    boys = [list(r) for r in A.boy_prefs]
    girls = [list(r) for r in A.girl_prefs]
    for _ in range(swaps):
        row = rng.choice(rng.choice([boys, girls]))
        if n > 1:
            i = rng.randrange(n - 1)
            row[i], row[i + 1] = row[i + 1], row[i]
    return Instance(n, tuple(map(tuple, boys)), tuple(map(tuple, girls)))


def random_error(rng: random.Random, A: Instance, local: bool | None = None) -> ErrorSpec:
    """A single-list error: either a full reshuffle or one adjacent swap."""
    n = A.n
    side = rng.choice(["boy", "girl"])
    agent = rng.randrange(n)
    cur = list(A.boy_prefs[agent] if side == "boy" else A.girl_prefs[agent])
    if local is None:
        local = rng.random() < 0.5
    if local and n > 1:
        i = rng.randrange(n - 1)
        cur[i], cur[i + 1] = cur[i + 1], cur[i]
    else:
        rng.shuffle(cur)
    return ErrorSpec(side, agent, tuple(cur))


@st.composite
def instances(draw, min_n: int = 1, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    perm = st.permutations(list(range(n)))
    boys = tuple(tuple(draw(perm)) for _ in range(n))
    girls = tuple(tuple(draw(perm)) for _ in range(n))
    return Instance(n, boys, girls)
