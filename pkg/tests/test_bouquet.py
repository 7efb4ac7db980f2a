from __future__ import annotations

import random

import pytest

from conftest import M, random_error, random_instance, rich_instance
from robustmatch.bouquet import (
    BouquetStructureError, Flower, MembershipOracle, NotSettingIError, canonical_path,
    find_bouquet, find_flower, find_next_tail, in_first_part,
)
from robustmatch.compression import crosses, separates, sublattice_from_edges
from robustmatch.core import is_stable
from robustmatch.oracle import stable_permutations
from robustmatch.order import mask_of
from robustmatch.robust import apply_error, bouquet_for_error, stable_after_error
from robustmatch.rotations import S, T, build_rotation_poset, matching_from_closed_set

R1, R2 = 2, 3


@pytest.fixture
def demo_P(demo_A):
    return build_rotation_poset(demo_A)


def check_bouquet_structure(work, bq):
    """The four structural conditions on a bouquet, in the working orientation."""
    edges = bq.working_edges()
    tails = bq.tails
    # 1: tails form a chain
    for a in tails:
        for b in tails:
            assert a == b or work.comparable(a, b)
    # 2: no path of length two
    heads = {v for _, v in edges}
    assert not heads & set(tails)
    # 3: heads of one flower pairwise incomparable
    for f in bq.flowers:
        for a in f.heads:
            for b in f.heads:
                assert a == b or not work.comparable(a, b)
    # 4: for r_i below r_j, a splitting set holds F_{r_i} + r_i and none of F_{r_j} + r_j
    for i, fi in enumerate(bq.flowers):
        Si = bq.splitting_sets[i]
        assert work.is_closed(Si)
        assert not any(separates(Si, e) or crosses(Si, e) for e in edges)
        assert all(Si >> v & 1 for v in fi.heads + (fi.tail,))
        for fj in bq.flowers:
            if fj.tail != fi.tail and work.precedes(fi.tail, fj.tail):
                assert not any(Si >> v & 1 for v in fj.heads + (fj.tail,))


def test_demo_bouquet(demo_A, demo_B, demo_P):
    oracle = MembershipOracle(demo_P, lambda m: is_stable(demo_B, m))
    bq = find_bouquet(demo_P, demo_A, oracle)
    assert bq.flowers == [Flower(T, (R1, R2))]
    assert bq.edges() == [(T, R1), (T, R2)]
    assert sublattice_from_edges(demo_P, demo_A, bq.edges()) == {M("1a,2b,3c,4d")}
    info = bq.trace[0]
    assert (info["X"], info["Y"]) == (mask_of([S]), mask_of([S]))
    check_bouquet_structure(demo_P, bq)
    assert oracle.calls <= 4 * demo_P.size


def test_demo_flower_and_next_tail(demo_B, demo_P):
    oracle = MembershipOracle(demo_P, lambda m: is_stable(demo_B, m))
    assert find_flower(demo_P, demo_P.full, T, oracle) == Flower(T, (R1, R2))
    # after removing the first flower only {s} is left and there is no tail
    assert find_next_tail(demo_P, mask_of([S]), oracle) is None


def test_empty_bouquet(demo_A, demo_P):
    oracle = MembershipOracle(demo_P, lambda m: True)
    assert find_next_tail(demo_P, demo_P.full, oracle) is None
    bq = find_bouquet(demo_P, demo_A, oracle)
    assert bq.flowers == [] and bq.edges() == []


def test_flower_s_when_m0_excluded(demo_A, demo_P):
    # L1 = everything with R1 eliminated; M0 is in L2, so s is a head
    oracle = MembershipOracle(demo_P, lambda m: m in {M("2a,1b,3c,4d"), M("2a,1b,4c,3d")})
    bq = find_bouquet(demo_P, demo_A, oracle)
    assert bq.flowers == [Flower(R1, (S,))]
    got = sublattice_from_edges(demo_P, demo_A, bq.edges())
    assert got == {M("2a,1b,3c,4d"), M("2a,1b,4c,3d")}


def test_oracle_cache_and_improper(demo_B, demo_P):
    oracle = MembershipOracle(demo_P, lambda m: is_stable(demo_B, m))
    assert oracle(mask_of([R1])) is None  # no s
    assert oracle(mask_of([S])) is True
    assert oracle(mask_of([S])) is True
    assert oracle.calls == 1


def test_invalid_partition_fails_fast(demo_A, demo_P):
    # L1 = {M0, Mz}; its complement {M1, M2} is not join-closed
    bad = {M("1a,2b,3c,4d"), M("2a,1b,4c,3d")}
    with pytest.raises(BouquetStructureError):
        find_bouquet(demo_P, demo_A, lambda m: m in bad)


def test_canonical_path_demo(demo_A, demo_P):
    L1 = {M("1a,2b,3c,4d"), M("2a,1b,3c,4d")}
    path = canonical_path(demo_P, demo_A, lambda m: m in L1)
    assert path == [S, R2]
    for c in demo_P.closed_sets():
        assert in_first_part(path, c) == (matching_from_closed_set(demo_P, demo_A, c) in L1)
    assert canonical_path(demo_P, demo_A, lambda m: True) == []


def test_canonical_path_needs_setting_one(demo_P, demo_A):
    with pytest.raises(NotSettingIError):
        canonical_path(demo_P, demo_A, MembershipOracle(demo_P, lambda m: True, dual=True))


def test_canonical_path_random_setting_one():
    # one edge (u, v) with v below u: both sides of the partition are sublattices
    rng = random.Random(9)
    done = 0
    while done < 60:
        inst = rich_instance(rng, rng.randint(3, 7))
        P = build_rotation_poset(inst)
        pairs = [(u, v) for u in range(P.size) for v in range(P.size)
                 if u != v and P.precedes(v, u) and v != T and u != S]
        u, v = rng.choice(pairs)
        L1 = {matching_from_closed_set(P, inst, c) for c in P.closed_sets() if not separates(c, (u, v))}
        if not L1:
            continue
        path = canonical_path(P, inst, lambda m: m in L1)
        for c in P.closed_sets():
            assert in_first_part(path, c) == (matching_from_closed_set(P, inst, c) in L1)
        done += 1


def test_random_single_errors():
    rng = random.Random(21)
    for k in range(150):
        n = rng.randint(2, 7)
        A = rich_instance(rng, n) if k % 2 else random_instance(rng, n)
        P = build_rotation_poset(A)
        e = random_error(rng, A)
        bq = bouquet_for_error(P, A, e)
        work = P.dual() if bq.dual else P
        check_bouquet_structure(work, bq)
        B = apply_error(A, e)
        want = {m for m in stable_permutations(A) if is_stable(B, m)}
        assert sublattice_from_edges(P, A, bq.edges()) == want
        # defining property on every closed set
        for c in P.closed_sets():
            m = matching_from_closed_set(P, A, c)
            assert (not any(separates(c, x) for x in bq.edges())) == stable_after_error(A, e, m)
