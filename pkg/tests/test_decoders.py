import itertools
import random

import pytest
from hypothesis import given, strategies as st

from _sweeps import ball_around, neighbourhood_completeness, random_receptions, soundness_sweep
from subspace_codes.channel import ChannelSpec, perturb, trial_rng
from subspace_codes.constructions import AugmentedKK, LiftedCode, kk_code
from subspace_codes.decoders import (ReceivedSpace, decode_augmented, ebdd, kk_bounded_decode,
                                     nearest_codeword_oracle)
from subspace_codes.ff import GF, FqMatrix, vstack
from subspace_codes.grassmann import (Subspace, distances_to, injection_distance,
                                      subspace_distance, subspace_neighbours)


@pytest.fixture(scope="module")
def E2632():
    return AugmentedKK(2, 6, 3, 2)


def random_matrix(rng, F, rows, n):
    return FqMatrix(F, [[rng.randrange(F.order) for _ in range(n)] for _ in range(rows)], n)


# -- KK bounded decoding -----------------------------------------------------

def test_kk_decode_codeword_and_one_insertion():
    layer = LiftedCode.build(2, 3, 3, 2)
    rng = random.Random(0)
    for i in range(0, layer.size, 5):
        U = layer.words[i]
        assert kk_bounded_decode(layer, U.basis)[0] == U
        for V in subspace_neighbours(U):
            if V.dim == 4:
                assert kk_bounded_decode(layer, V.basis)[0] == U


def test_kk_decode_low_rank_fails():
    layer = LiftedCode.build(2, 3, 3, 2)
    rng = random.Random(1)
    for _ in range(50):
        A = random_matrix(rng, GF(2), 1, 6)
        assert kk_bounded_decode(layer, A) is None


@pytest.mark.parametrize("q,r,c,d", [(2, 3, 3, 2), (2, 3, 4, 3), (3, 2, 2, 2), (2, 2, 4, 2)])
def test_kk_decode_contract_against_oracle(q, r, c, d):
    layer = LiftedCode.build(q, r, c, d)
    F = GF(q)
    words = list(layer.words)
    rng = random.Random(q * 10 + d)
    for _ in range(300):
        A = random_matrix(rng, F, rng.randint(1, r + c), r + c)
        U = ReceivedSpace(A).space
        dist = distances_to(U, words, "subspace")
        res = kk_bounded_decode(layer, A)
        within = [W for W, x in zip(words, dist) if x <= d - 1]
        if within:
            assert len(within) == 1 and res is not None and res[0] == within[0]
        else:
            assert res is None
    # receptions near codewords exercise the rank-metric fast path
    for i in range(min(layer.size, 40)):
        U = words[i]
        for V in itertools.islice(ball_around(U, d - 1), 30):
            if V.dim:
                assert kk_bounded_decode(layer, V.basis)[0] == U


def test_kk_decode_column_mismatch():
    layer = LiftedCode.build(2, 3, 3, 2)
    with pytest.raises(ValueError):
        kk_bounded_decode(layer, FqMatrix.zeros(GF(2), 1, 5))


# -- EBDD --------------------------------------------------------------------

@pytest.mark.parametrize("params", [(2, 6, 3, 2), (2, 8, 4, 2), (2, 8, 4, 3), (2, 7, 3, 2)])
def test_ebdd_on_codewords(params):
    E = AugmentedKK(*params)
    rng = random.Random(2)
    labelled = list(E.labelled_words())
    for k, U in rng.sample(labelled, min(80, len(labelled))):
        res = ebdd(k, U.basis, E)
        assert res.ok and res.word == U and res.d_k == 0


def test_ebdd_failure_statuses_carry_sentinels():
    E = AugmentedKK(2, 8, 4, 2)
    rng = random.Random(3)
    seen = set()
    for _ in range(400):
        A = random_matrix(rng, E.field, rng.randint(2, 6), 8)
        for k in range(E.num_layers):
            res = ebdd(k, A, E)
            seen.add(res.status)
            assert res.f_k >= 0
            if not res.ok:
                assert res.d_k == E.d and res.f_k == 0
    assert {"kk-failure", "c-failure"} <= seen


def test_ebdd_layer_out_of_range():
    E = AugmentedKK(2, 6, 3, 2)
    with pytest.raises(ValueError):
        ebdd(2, E.word_by_index(0).basis, E)


def test_fk_certificate_500_receptions():
    E = AugmentedKK(2, 8, 4, 2)
    st = soundness_sweep(E, random_receptions(E, 500, seed=11))
    assert st.fk_checked > 0
    assert st.fk_violations == 0


# -- layered decoder ----------------------------------------------------------

def test_decode_every_codeword(E2632):
    for U in E2632.words():
        res = decode_augmented(E2632, U.basis)
        assert res.word == U and res.distance == 0


def test_decode_neighbourhood_exhaustive(E2632):
    checked, wrong = neighbourhood_completeness(E2632)
    assert checked > 65 and wrong == 0


@pytest.mark.parametrize("params", [(2, 6, 3, 3), (2, 7, 3, 2)])
def test_decode_neighbourhood_other_codes(params):
    checked, wrong = neighbourhood_completeness(AugmentedKK(*params))
    assert wrong == 0


def test_decode_neighbourhood_sampled_2843():
    E = AugmentedKK(2, 8, 4, 3)
    rng = random.Random(4)
    labelled = list(E.labelled_words())
    for k, U in rng.sample(labelled, 12) + [labelled[-1]]:
        for V in ball_around(U, 2):
            assert decode_augmented(E, V.basis if V.dim else FqMatrix.zeros(E.field, 1, 8)).word == U


def test_equal_row_spaces_decode_identically(E2632):
    rng = random.Random(5)
    F = E2632.field
    for _ in range(200):
        A = random_matrix(rng, F, rng.randint(1, 5), 6)
        T = random_matrix(rng, F, 2, A.nrows)
        B = vstack(A, T @ A)
        ra, rb = decode_augmented(E2632, A), decode_augmented(E2632, B)
        assert ra.word == rb.word and ra.branch == rb.branch


def test_soundness_random(E2632):
    st = soundness_sweep(E2632, random_receptions(E2632, 1500, seed=3))
    assert st.oracle_mismatch == 0 and st.not_unique == 0
    assert st.beyond_ceiling == 0
    assert st.low_rank_not_failed == 0 and st.low_rank > 0
    assert st.fk_violations == 0


@pytest.mark.parametrize("params", [(2, 6, 3, 3), (2, 7, 3, 2), (2, 8, 4, 3)])
def test_soundness_other_codes(params):
    E = AugmentedKK(*params)
    st = soundness_sweep(E, random_receptions(E, 400, seed=8))
    assert st.oracle_mismatch == 0 and st.not_unique == 0
    assert st.beyond_ceiling == 0 and st.low_rank_not_failed == 0 and st.fk_violations == 0


def test_rank_guard(E2632):
    rng = random.Random(6)
    for _ in range(100):
        A = random_matrix(rng, E2632.field, 1, 6)
        res = decode_augmented(E2632, A)
        assert res.word is None and res.branch == "failure: rank below r-d+1"


def test_metric_parameter_only_changes_reported_distance(E2632):
    rng = random.Random(7)
    for _ in range(200):
        A = random_matrix(rng, E2632.field, rng.randint(2, 5), 6)
        a = decode_augmented(E2632, A, "subspace")
        b = decode_augmented(E2632, A, "injection")
        assert a.word == b.word and a.branch == b.branch
        if a.word is not None:
            V = ReceivedSpace(A).space
            assert a.distance == subspace_distance(V, a.word)
            assert b.distance == injection_distance(V, a.word)
    with pytest.raises(ValueError):
        decode_augmented(E2632, A, "hamming")


def test_non_strict_variant_superset(E2632):
    rng = random.Random(8)
    words = E2632.words()
    for _ in range(300):
        A = random_matrix(rng, E2632.field, rng.randint(2, 5), 6)
        strict = decode_augmented(E2632, A, strict=True)
        loose = decode_augmented(E2632, A, strict=False)
        if strict.word is not None:
            assert loose.word == strict.word
        if loose.word is not None:
            # a nearest codeword, possibly tied
            V = ReceivedSpace(A).space
            best = int(distances_to(V, words, "subspace").min())
            assert subspace_distance(V, loose.word) == best


def test_injection_radius_completeness():
    # within injection radius floor((d-1)/2) the transmitted word is always recovered
    E = AugmentedKK(2, 8, 4, 3)
    rng = random.Random(9)
    labelled = list(E.labelled_words())
    for _, U in rng.sample(labelled, 15):
        for V in ball_around(U, 2):
            if V.dim and injection_distance(U, V) <= 1:
                assert decode_augmented(E, V.basis, "injection").word == U


def test_injection_distance_d_minus_1_can_tie(E2632):
    # two codewords at injection distance d can share a reception at injection
    # distance d-1 from both, so no decoder recovers both senders
    words = E2632.words()
    U, W = next((U, W) for U, W in itertools.combinations(words, 2)
                if injection_distance(U, W) == 2)
    inter = [v for v in _vectors(U) if W.contains_vector(v) and any(v)]
    u = next(v for v in _vectors(U) if not W.contains_vector(v))
    w = next(v for v in _vectors(W) if not U.contains_vector(v))
    V = Subspace.span(E2632.field, [inter[0], u, w], 6)
    assert injection_distance(V, U) == injection_distance(V, W) == 1
    near, _, unique = nearest_codeword_oracle(words, V, "injection")
    assert not unique
    assert decode_augmented(E2632, V.basis).word in (None, U, W)


def _vectors(U):
    F = U.field
    for coeffs in itertools.product(range(F.order), repeat=U.dim):
        v = [0] * U.n
        for c, row in zip(coeffs, U.basis.rows):
            for j, x in enumerate(row):
                v[j] = F.add(v[j], F.mul(c, x))
        yield v


def test_metric_equivalence_of_argmin(E2632):
    words = E2632.words()
    rng = random.Random(10)
    for _ in range(300):
        A = random_matrix(rng, E2632.field, rng.randint(1, 6), 6)
        V = ReceivedSpace(A).space
        ds = distances_to(V, words, "subspace")
        di = distances_to(V, words, "injection")
        assert set((ds == ds.min()).nonzero()[0]) == set((di == di.min()).nonzero()[0])


def test_oracle_basics(E2632):
    words = E2632.words()
    U = words[7]
    assert nearest_codeword_oracle(words, U.basis) == (U, 0, True)
    zero = FqMatrix.zeros(E2632.field, 1, 6)
    _, _, unique = nearest_codeword_oracle(words, zero)
    assert not unique


@given(seed=st.integers(0, 2 ** 32 - 1), e=st.integers(0, 3), i=st.integers(0, 3))
def test_within_radius_channel_property(seed, e, i):
    E = AugmentedKK(2, 6, 3, 2)
    rng = trial_rng(seed, 0)
    U = E.word_by_index(int(rng.integers(0, E.size)))
    A = perturb(U, ChannelSpec(e, i), rng)
    V = ReceivedSpace(A).space
    assert subspace_distance(U, V) <= e + i
    res = decode_augmented(E, A)
    if subspace_distance(U, V) <= E.d - 1:
        assert res.word == U
    elif res.word is not None:
        near, _, unique = nearest_codeword_oracle(E.words(), V)
        assert unique and near == res.word
