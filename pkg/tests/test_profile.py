import random

import pytest
from hypothesis import given, settings, strategies as st

from fracmix.profile import NotFullRank, RankProfile, pivot_index_set, rank_profile_J, rank_profile_T, reduce_kernel
from fracmix.ratlinalg import BlockMatrix, RatMatrix, random_invertible, random_matrix, rank, vstack

GAMMA_D = [[1, 0], [0, 1], [1, 0], [0, 0], [0, 0], [0, 0]]


def T_with_tail(tail):
    # m=2, n=1; only the last column matters for the profile
    return BlockMatrix.from_rows(2, 1, "T", [[1, 0, 0], [0, 1, tail[0]], [0, 0, tail[1]]])


@pytest.mark.parametrize("tail, ranks, drops", [
    ((1, 1), (1, 1, 0), (3,)),
    ((1, 0), (1, 0, 0), (2,)),
    ((0, 0), (0, 0, 0), ()),
])
def test_profile_T_examples(tail, ranks, drops):
    prof = rank_profile_T(T_with_tail(tail))
    assert prof.ranks == ranks and prof.drops == drops and prof.nu == len(drops)


def test_profile_J_examples():
    prof = rank_profile_J(BlockMatrix.from_rows(3, 2, "J", GAMMA_D))
    assert prof.ranks == (2, 1, 0, 0) and prof.drops == (1, 2) and prof.nu == 2
    prof = rank_profile_J(BlockMatrix.from_rows(2, 1, "J", [[1], [1]]))
    assert prof.ranks == (1, 1, 0) and prof.drops == (2,)
    prof = rank_profile_J(BlockMatrix.from_rows(1, 2, "J", [[2, 1], [1, 1]]))
    assert prof.ranks == (2, 0) and prof.drops == (1,)


def test_pivot_examples():
    assert pivot_index_set(RankProfile("J", 2, 1, (2, 1, 0, 0))) == ((1, 2), (2, 2))
    assert pivot_index_set(RankProfile("J", 1, 1, (1, 1, 0))) == ((2, 1),)
    assert pivot_index_set(RankProfile("J", 3, 1, (3, 0))) == ((1, 1), (1, 2), (1, 3))
    with pytest.raises(NotFullRank):
        pivot_index_set(RankProfile("J", 2, 1, (1, 0)))


def test_identity_stack_pivots_in_last_block():
    # gamma_i = n for every i <= m, so the only drop is at m
    n = 3
    rows = RatMatrix.identity(n).tolist() * 2
    prof = rank_profile_J(BlockMatrix.from_rows(2, n, "J", rows))
    assert prof.drops == (2,)
    assert pivot_index_set(prof) == ((2, 1), (2, 2), (2, 3))


def test_reduce_kernel_examples():
    cf = reduce_kernel(BlockMatrix.from_rows(2, 1, "J", [[1], [1]]))
    assert cf.selected == {1: (), 2: (1,)}
    assert cf.P == RatMatrix.from_rows([[1, -1], [0, 1]])
    cf = reduce_kernel(BlockMatrix.from_rows(1, 2, "J", [[1, 2], [3, 4]]))
    assert cf.selected == {1: (1, 2)} and cf.P == RatMatrix.identity(2)
    cf = reduce_kernel(BlockMatrix.from_rows(3, 2, "J", GAMMA_D))
    assert [len(cf.selected[i]) for i in (1, 2, 3)] == [1, 1, 0]


def test_reduce_kernel_dependency_inside_block():
    # row 1 of block 1 depends on row 2 of block 1 (the later row); P must stay upper triangular
    D = BlockMatrix.from_rows(2, 2, "J", [[1, 0], [2, 0], [0, 1], [0, 0]])
    cf = reduce_kernel(D)
    cert = cf.certificate()
    assert cert["U_unit_upper_triangular_minus_one_diagonal"] and cert["rank_G"] == 2


def test_reduce_kernel_needs_full_rank():
    with pytest.raises(NotFullRank):
        reduce_kernel(BlockMatrix.from_rows(2, 2, "J", [[1, 2], [2, 4], [0, 0], [3, 6]]))


def random_full_rank_D(rng, m, n):
    while True:
        M = random_matrix(rng, m * n, n, bound=4, zero_prob=0.5)
        if rank(M) == n:
            return BlockMatrix(m, n, "J", M)


def test_reduce_kernel_certificate_random():
    rng = random.Random(5)
    for _ in range(500):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        D = random_full_rank_D(rng, m, n)
        cf = reduce_kernel(D)  # verifies its own certificate
        prof = rank_profile_J(D)
        assert len(pivot_index_set(prof)) == n
        assert sum(len(r) for r in cf.selected.values()) == n
        cert = cf.certificate()
        assert cert["rank_G"] == n and len(cert["nonzero_rows_of_PD"]) == n


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 3))
def test_profiles_invariant_under_column_change(seed, m, n):
    rng = random.Random(seed)
    D = random_full_rank_D(rng, m, n)
    V = random_invertible(rng, n, bound=4)
    DV = BlockMatrix(m, n, "J", D.base @ V)
    assert rank_profile_J(DV).ranks == rank_profile_J(D).ranks


def test_profile_T_with_m1_is_block_rank():
    rng = random.Random(2)
    for _ in range(50):
        n = rng.randint(1, 3)
        A = BlockMatrix(1, n, "T", random_matrix(rng, 2 * n, 2 * n, bound=3, zero_prob=0.5))
        assert rank_profile_T(A).ranks == (rank(A.block(2, 2)), 0)


def test_profile_T_against_direct_stack():
    rng = random.Random(3)
    for _ in range(50):
        m, n = rng.randint(1, 3), rng.randint(1, 2)
        A = BlockMatrix(m, n, "T", random_matrix(rng, (m + 1) * n, (m + 1) * n, bound=3, zero_prob=0.6))
        prof = rank_profile_T(A)
        for k in range(2, m + 2):
            direct = rank(vstack(A.block(i, m + 1) for i in range(k, m + 2)))
            assert prof.rank_at(k) == direct


def test_rank_profile_rejects_increasing():
    with pytest.raises(ValueError):
        RankProfile("J", 1, 1, (0, 1, 0))
