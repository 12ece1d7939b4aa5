import itertools
import random

import pytest
from hypothesis import given, strategies as st

from subspace_codes.constructions import (AugmentedKK, Cdc, PivotSet, ac_upper, augmented_kk,
                                          extend_dimension, extend_length, full_grassmannian_code,
                                          kk_cardinality, kk_code, lift, permuted_lift,
                                          permuted_lifting_covering, pivot_decomposition,
                                          skachek_cardinality)
from subspace_codes.covering import covering_radius
from subspace_codes.ff import GF, FqMatrix
from subspace_codes.grassmann import Subspace, grassmannian, injection_distance
from subspace_codes.rank_metric import (RankCodebook, all_matrices, greedy_rank_covering,
                                        mrd_cardinality, rank_distance)

F2 = GF(2)


def mat(rows, n, q=2):
    return FqMatrix(GF(q), rows, n)


# -- liftings ----------------------------------------------------------------

def test_lift_zero():
    U = lift(FqMatrix.zeros(F2, 2, 3))
    assert U == Subspace.span(F2, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]], 5)


def test_lift_isometry_exhaustive_2x2():
    mats = list(all_matrices(2, 2, 2))
    lifts = [lift(C) for C in mats]
    assert len(set(lifts)) == 16
    for (C, U), (D, V) in itertools.product(zip(mats, lifts), repeat=2):
        assert injection_distance(U, V) == rank_distance(C, D)


def test_permuted_lift_identity_j():
    rng = random.Random(0)
    for _ in range(20):
        C = FqMatrix(F2, [[rng.randrange(2) for _ in range(3)] for _ in range(2)], 3)
        assert permuted_lift(PivotSet((0, 1), 5), C) == lift(C)


def test_permuted_lift_example_n4_j13():
    C = mat([[1, 0], [1, 1]], 2)
    U = permuted_lift(PivotSet((1, 3), 4), C)
    # identity columns at 1, 3; C columns at 0, 2
    expected = Subspace.span(F2, [[1, 1, 0, 0], [1, 0, 1, 1]], 4)
    assert U == expected


def test_pivot_set_permutation_order():
    P = PivotSet((4, 1), 6)
    assert P.J == (1, 4)
    assert P.permutation == (1, 4, 0, 2, 3, 5)
    with pytest.raises(ValueError):
        PivotSet((1, 1), 4)


def test_permuted_lift_fixed_j_isometry():
    mats = list(all_matrices(2, 2, 2))
    for J in itertools.combinations(range(4), 2):
        P = PivotSet(J, 4)
        lifts = [permuted_lift(P, C) for C in mats]
        for (C, U), (D, V) in itertools.product(zip(mats, lifts), repeat=2):
            assert injection_distance(U, V) == rank_distance(C, D)


@pytest.mark.parametrize("q,n,r", [(2, 4, 2), (2, 5, 2), (3, 4, 2), (2, 6, 3)])
def test_every_subspace_is_a_permuted_lift_at_its_pivots(q, n, r):
    for U in grassmannian(q, n, r):
        J, C = pivot_decomposition(U)
        assert J.J == U.pivots
        assert permuted_lift(J, C) == U


def test_permuted_lift_representation_not_unique():
    # a subspace can be I(J, C) for several J; the rref pivot set is one of them
    U = Subspace.span(F2, [[1, 1, 0, 0], [0, 0, 1, 1]], 4)
    reps = [J for J in itertools.combinations(range(4), 2)
            if any(permuted_lift(PivotSet(J, 4), C) == U for C in all_matrices(2, 2, 2))]
    assert U.pivots in reps and len(reps) > 1


# -- KK and augmented KK -----------------------------------------------------

def test_kk_examples():
    c = kk_code(2, 4, 2, 2)
    assert len(c) == 4 and c.min_distance() == 2
    for U, V in itertools.combinations(c.words, 2):
        assert injection_distance(U, V) == 2
    assert len(kk_code(2, 4, 2, 1)) == 16
    for q, n, r, d in [(2, 6, 3, 2), (2, 7, 3, 3), (3, 5, 2, 2)]:
        c = kk_code(q, n, r, d)
        assert len(c) == kk_cardinality(q, n, r, d) and c.verify_declared()
    with pytest.raises(ValueError):
        kk_code(2, 4, 2, 3)


AUG = {(2, 6, 3, 2): 65, (2, 6, 3, 3): 9, (2, 7, 3, 2): 264, (2, 7, 3, 3): 17,
       (2, 8, 4, 3): 257, (2, 8, 4, 4): 17, (2, 8, 4, 2): 4161, (3, 6, 3, 2): 730}


@pytest.mark.parametrize("params", sorted(AUG))
def test_augmented_cardinality(params):
    E = augmented_kk(*params)
    assert E.size == E.cardinality_formula() == AUG[params]
    assert E.size > kk_cardinality(*params)


@pytest.mark.parametrize("params", [(2, 6, 3, 2), (2, 6, 3, 3), (2, 7, 3, 2), (2, 8, 4, 3), (2, 8, 4, 4)])
def test_augmented_min_distance_exhaustive(params):
    E = augmented_kk(*params)
    code = E.to_cdc()
    assert len(code) == E.size
    assert code.min_distance() == params[3]


def test_augmented_2_8_4_2_count_formula():
    E = augmented_kk(2, 8, 4, 2)
    assert E.size == 4096 + 4 * 16 + 1
    assert [E.layer_size(k) for k in range(E.num_layers)] == [4096, 64, 1]


def test_augmented_small_layer_structure():
    E = augmented_kk(2, 6, 3, 3)
    assert E.layer0.size == 8
    assert E.C[1].rows == 0 and E.C[1].mrd is None and E.D[1].mrd is None
    assert E.size == 9


@pytest.mark.parametrize("params", [(2, 7, 3, 2), (2, 8, 4, 2), (2, 8, 4, 3)])
def test_layer_separation(params):
    E = augmented_kk(*params)
    d = params[3]
    labelled = list(E.labelled_words())
    rng = random.Random(1)
    sample = rng.sample(labelled, min(300, len(labelled)))
    for (k, U), (c, V) in itertools.combinations(sample, 2):
        if k != c:
            assert injection_distance(U, V) >= abs(k - c) * d


def test_word_by_index_and_layer_of():
    E = augmented_kk(2, 8, 4, 2)
    labelled = list(E.labelled_words())
    for i in range(0, len(labelled), 37):
        k, U = labelled[i]
        assert E.word_by_index(i) == U
        assert E.layer_of(U) == k
    with pytest.raises(IndexError):
        E.word_by_index(E.size)


def test_layer_words_block_shape():
    E = augmented_kk(2, 8, 4, 2)
    for U in E.layer_words(1):
        B = U.basis
        top, kd = 2, 2
        for i in range(top):
            assert B.rows[i][4:6] == (0, 0)
        for i in range(kd):
            assert B.rows[top + i][:4] == (0, 0, 0, 0)
            assert B.rows[top + i][4:6] == tuple(int(i == j) for j in range(kd))


def test_augmented_rejects_bad_params():
    for args in [(2, 5, 3, 2), (2, 6, 3, 4), (2, 6, 3, 0)]:
        with pytest.raises(ValueError):
            AugmentedKK(*args)


# -- Skachek comparison ------------------------------------------------------

@pytest.mark.parametrize("q,n,r,d", [(2, 9, 3, 2), (2, 12, 4, 2), (2, 12, 4, 3), (2, 10, 3, 2), (3, 9, 3, 2)])
def test_augmented_beats_skachek(q, n, r, d):
    L = skachek_cardinality(q, n, r, d)
    E = AugmentedKK(q, n, r, d)
    assert E.cardinality_formula() > L
    assert L <= ac_upper(q, n, r, d)
    assert E.cardinality_formula() <= ac_upper(q, n, r, d)


def test_skachek_reduces_to_kk_when_3r_gt_n():
    for q, n, r, d in [(2, 7, 3, 2), (2, 8, 3, 3), (2, 11, 4, 2), (3, 7, 3, 2)]:
        assert skachek_cardinality(q, n, r, d) == kk_cardinality(q, n, r, d)


# -- expansions --------------------------------------------------------------

def test_extend_length_radius():
    full = full_grassmannian_code(2, 4, 2)
    assert covering_radius(full) == 0
    ext = extend_length(full)
    assert len(ext) == len(full) and ext.n == 5
    assert covering_radius(ext) <= 1
    single = Cdc(2, 4, 2, (grassmannian(2, 4, 2)[0],))
    rad = covering_radius(single)
    assert covering_radius(extend_length(single)) <= rad + 1


def test_extend_dimension_radius():
    base = full_grassmannian_code(2, 4, 1)
    out = extend_dimension(base, seed=3)
    assert all(U.dim == 2 for U in out.words)
    assert len(out) <= len(base)
    assert covering_radius(out) <= 1
    assert out.metadata["extend_seed"] == 3
    again = extend_dimension(base, seed=3)
    assert again.words == out.words


def test_iterated_extend_length_witness():
    code = full_grassmannian_code(2, 4, 2)
    for rho in (1, 2):
        code = extend_length(code)
        assert len(code) == 35
        assert covering_radius(code) <= rho


# -- permuted lifting covering ----------------------------------------------

def test_permuted_lifting_covering_trivial_book():
    book = RankCodebook.zero(2, 2, 2)
    code = permuted_lifting_covering(2, 4, 2, 2, book)
    assert len(code) <= 6
    assert covering_radius(code) <= 2


def test_permuted_lifting_covering_greedy_book():
    book = greedy_rank_covering(2, 2, 2, 1)
    code = permuted_lifting_covering(2, 4, 2, 1, book)
    assert len(code) <= 6 * len(book)
    assert covering_radius(code) <= 1


def test_permuted_lifting_covering_rejects_wrong_book():
    with pytest.raises(ValueError):
        permuted_lifting_covering(2, 5, 2, 1, RankCodebook.zero(2, 2, 2))


@given(seed=st.integers(0, 10 ** 6))
def test_lift_isometry_random(seed):
    rng = random.Random(seed)
    q = rng.choice([2, 3])
    r, c = rng.randint(1, 3), rng.randint(1, 4)
    C = FqMatrix(GF(q), [[rng.randrange(q) for _ in range(c)] for _ in range(r)], c)
    D = FqMatrix(GF(q), [[rng.randrange(q) for _ in range(c)] for _ in range(r)], c)
    assert injection_distance(lift(C), lift(D)) == rank_distance(C, D)
    J = PivotSet(tuple(sorted(rng.sample(range(r + c), r))), r + c)
    assert injection_distance(permuted_lift(J, C), permuted_lift(J, D)) == rank_distance(C, D)


def test_cdc_rejects_wrong_dimension_and_dedups():
    U = Subspace.span(F2, [[1, 0, 0]], 3)
    V = Subspace.span(F2, [[1, 0, 0], [0, 1, 0]], 3)
    with pytest.raises(ValueError):
        Cdc(2, 3, 1, (U, V))
    assert len(Cdc(2, 3, 1, (U, U))) == 1
