import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from subspace_codes.ff import GF, FqMatrix, rank
from subspace_codes.grassmann import (ResourceLimitError, Subspace, ball_intersection, ball_volume,
                                      distance_histogram, distances_to, dual, eberlein,
                                      enumerate_grassmannian, gaussian_binomial, grassmannian,
                                      injection_distance, intersection_number_eberlein,
                                      intersection_number_recursive, intersection_numbers_bruteforce,
                                      matrix_space_distance, profile, reference_pair, sphere_size,
                                      subspace_distance, union_volume_bound, vc_bounds_check)

F2 = GF(2)


def sp(rows, n, q=2):
    return Subspace.span(GF(q), rows, n)


def projective_space(q, n):
    return [U for r in range(n + 1) for U in grassmannian(q, n, r)]


def gb_bruteforce(n, r, q):
    # count r-subsets of linearly independent vectors, divided by |GL_r| basis choices
    num = math.prod(q ** n - q ** i for i in range(r))
    den = math.prod(q ** r - q ** i for i in range(r))
    return num // den


# -- counting ----------------------------------------------------------------

def test_gaussian_binomial_examples():
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(4, 2, 2) == 35
    for n in range(6):
        assert gaussian_binomial(n, 0, 3) == 1
    assert gaussian_binomial(3, 4, 2) == 0
    assert gaussian_binomial(3, -1, 2) == 0


@given(n=st.integers(0, 9), q=st.sampled_from([2, 3, 4, 5]), data=st.data())
def test_gaussian_binomial_symmetry_and_pascal(n, q, data):
    r = data.draw(st.integers(0, n))
    assert gaussian_binomial(n, r, q) == gaussian_binomial(n, n - r, q)
    if 1 <= r <= n - 1:
        assert gaussian_binomial(n, r, q) == (gaussian_binomial(n - 1, r - 1, q)
                                             + q ** r * gaussian_binomial(n - 1, r, q))


@pytest.mark.parametrize("q,n,r", [(2, 2, 1), (2, 4, 2), (2, 5, 2), (3, 4, 2), (2, 6, 3), (4, 3, 1)])
def test_enumeration_count_and_distinct(q, n, r):
    pts = list(enumerate_grassmannian(q, n, r))
    assert len(pts) == gaussian_binomial(n, r, q) == gb_bruteforce(n, r, q)
    assert len(set(pts)) == len(pts)
    assert all(U.dim == r and rank(U.basis) == r for U in pts)


def test_enumeration_zero_space_and_cap():
    assert [U.dim for U in enumerate_grassmannian(3, 4, 0)] == [0]
    with pytest.raises(ResourceLimitError):
        list(enumerate_grassmannian(2, 8, 4, cap=100))


def test_enumeration_order_deterministic():
    a = [U.basis.rows for U in enumerate_grassmannian(2, 4, 2)]
    b = [U.basis.rows for U in enumerate_grassmannian(2, 4, 2)]
    assert a == b
    piv = [U.pivots for U in enumerate_grassmannian(2, 4, 2)]
    assert piv == sorted(piv)


def test_sphere_and_ball_examples():
    p = profile(2, 4, 2)
    assert sphere_size(p, 1) == 18
    assert ball_volume(p, 1) == 19
    assert ball_volume(p, 0) == 1
    for prof in (profile(2, 5, 2), profile(3, 4, 2), profile(2, 6, 3)):
        assert sphere_size(prof, 0) == 1
        assert sum(prof.sphere(d) for d in range(prof.r + 1)) == prof.size


@pytest.mark.parametrize("q,n,r", [(2, 4, 2), (2, 5, 2), (3, 4, 2), (2, 6, 3)])
def test_sphere_sizes_match_histograms_every_center(q, n, r):
    p = profile(q, n, r)
    pts = grassmannian(q, n, r)
    expected = {d: p.sphere(d) for d in range(r + 1) if p.sphere(d)}
    step = 1 if len(pts) <= 200 else 37
    for U in pts[::step]:
        assert dict(distance_histogram(U, pts)) == expected


@pytest.mark.parametrize("q,n,r", [(2, 4, 2), (2, 6, 3), (3, 6, 2), (2, 8, 4)])
def test_profile_gaussian_bracket_and_vc_bounds(q, n, r):
    p = profile(q, n, r)
    low = q ** (r * (n - r))
    assert low <= p.size < low / p.kq
    for t in range(r + 1):
        lo, hi = vc_bounds_check(p, t)
        assert lo <= p.ball(t) < hi


def test_vc_bounds_examples():
    lo, _ = vc_bounds_check(profile(2, 4, 2), 1)
    assert lo == 8 and profile(2, 4, 2).ball(1) == 19
    assert vc_bounds_check(profile(2, 4, 2), 0)[0] == 1
    lo, hi = vc_bounds_check(profile(2, 6, 3), 2)
    assert lo == 2 ** 8 and lo <= profile(2, 6, 3).ball(2) < hi


def test_kq_close_to_product():
    p = profile(2, 4, 2)
    approx = math.prod(1 - 2.0 ** -j for j in range(1, 200))
    assert abs(p.kq - approx) < 1e-12


# -- metrics -----------------------------------------------------------------

def test_distance_examples():
    U = sp([[1, 0]], 2)
    V = sp([[0, 1]], 2)
    assert subspace_distance(U, U) == 0 and injection_distance(U, U) == 0
    assert subspace_distance(U, V) == 2
    a = sp([[1, 0, 0, 0]], 4)
    b = sp([[1, 0, 0, 0], [0, 1, 0, 0]], 4)
    assert subspace_distance(a, b) == 1
    assert injection_distance(a, b) == 1


def test_ambient_mismatch_raises():
    with pytest.raises(ValueError):
        subspace_distance(sp([[1, 0]], 2), sp([[1, 0, 0]], 3))


def test_metric_axioms_exhaustive_projective_space():
    pts = projective_space(2, 4)
    assert len(pts) == sum(gaussian_binomial(4, r, 2) for r in range(5))
    n = len(pts)
    DS = [[subspace_distance(U, V) for V in pts] for U in pts]
    DI = [[injection_distance(U, V) for V in pts] for U in pts]
    for D in (DS, DI):
        for i in range(n):
            assert D[i][i] == 0
            for j in range(n):
                assert D[i][j] == D[j][i]
                assert (D[i][j] == 0) == (i == j)
    for D in (DS, DI):
        for i, j, k in itertools.product(range(n), repeat=3):
            if D[i][k] > D[i][j] + D[j][k]:
                raise AssertionError(f"triangle fails at {i},{j},{k}")
    for i in range(n):
        for j in range(n):
            dd = abs(pts[i].dim - pts[j].dim)
            assert 2 * DI[i][j] == DS[i][j] + dd


@pytest.mark.parametrize("n", [4, 5])
def test_equal_dimension_ds_twice_di(n):
    pts = grassmannian(2, n, 2)
    for U in pts:
        ds = distances_to(U, pts, "subspace")
        di = distances_to(U, pts, "injection")
        assert (ds == 2 * di).all()


def test_batch_distances_agree_with_scalar():
    for q, n, r in [(2, 5, 2), (3, 4, 2), (2, 12, 3)]:
        rng = random.Random(q + n)
        F = GF(q)
        pts = []
        for _ in range(20):
            pts.append(Subspace(FqMatrix(F, [[rng.randrange(q) for _ in range(n)] for _ in range(r)], n)))
        for U in pts[:5]:
            fast = distances_to(U, pts, "injection").tolist()
            assert fast == [injection_distance(U, V) for V in pts]


def test_subspace_equality_is_row_space_equality():
    rng = random.Random(7)
    for _ in range(40):
        M = FqMatrix(GF(3), [[rng.randrange(3) for _ in range(5)] for _ in range(3)], 5)
        T = FqMatrix(GF(3), [[1, 1, 0], [0, 1, 2], [0, 0, 2]], 3)
        assert Subspace(T @ M) == Subspace(M)
        assert hash(Subspace(T @ M)) == hash(Subspace(M))


def _random_matrix(rng, q, rows, cols):
    return FqMatrix(GF(q), [[rng.randrange(q) for _ in range(cols)] for _ in range(rows)], cols)


def test_matrix_space_distance_agrees_and_bounds():
    rng = random.Random(11)
    for _ in range(1000):
        q = rng.choice([2, 3])
        c = rng.randint(2, 6)
        A = _random_matrix(rng, q, rng.randint(1, 4), c)
        B = _random_matrix(rng, q, rng.randint(1, 4), c)
        ds, di = matrix_space_distance(A, B)
        assert ds >= abs(rank(A) - rank(B))
        U, V = Subspace(A), Subspace(B)
        assert (ds, di) == (subspace_distance(U, V), injection_distance(U, V))
    A = _random_matrix(rng, 2, 3, 5)
    assert matrix_space_distance(A, A) == (0, 0)


def test_truncation_never_increases_distance():
    rng = random.Random(12)
    for _ in range(500):
        q = rng.choice([2, 3])
        c = rng.randint(3, 7)
        A = _random_matrix(rng, q, rng.randint(1, 4), c)
        B = _random_matrix(rng, q, rng.randint(1, 4), c)
        cols = sorted(rng.sample(range(c), rng.randint(1, c - 1)))
        full = matrix_space_distance(A, B)
        trunc = matrix_space_distance(A.columns(cols), B.columns(cols))
        assert trunc[0] <= full[0] and trunc[1] <= full[1]


# -- duality -----------------------------------------------------------------

def test_dual_examples():
    full = Subspace.full(F2, 4)
    assert dual(full).dim == 0
    assert dual(sp([[1, 0, 0, 0]], 4)) == sp([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 4)


@pytest.mark.parametrize("q,n", [(2, 4), (3, 3)])
def test_dual_involution_dimension_orthogonality(q, n):
    F = GF(q)
    for U in projective_space(q, n):
        D = dual(U)
        assert D.dim == n - U.dim
        assert dual(D) == U
        if U.dim and D.dim:
            assert (U.basis @ D.basis.T).is_zero()


def test_dual_isometry_exhaustive_e1_24():
    pts = grassmannian(2, 4, 1)
    for U, V in itertools.product(pts, repeat=2):
        assert injection_distance(U, V) == injection_distance(dual(U), dual(V))


# -- association scheme ------------------------------------------------------

def test_eberlein_basic_identities():
    for q, n, r in [(2, 4, 2), (2, 5, 2), (3, 4, 2), (2, 6, 3), (2, 7, 3)]:
        p = profile(q, n, r)
        for i in range(r + 1):
            assert eberlein(0, i, p) == 1
        for j in range(r + 1):
            assert eberlein(j, 0, p) == p.sphere(j)


def test_eberlein_orthogonality():
    # eigenvalues of the scheme: sum_i mu_i E_j(i) E_k(i) = [n r] N_C(j) delta_jk
    for q, n, r in [(2, 4, 2), (2, 6, 3), (3, 5, 2)]:
        p = profile(q, n, r)
        for j, k in itertools.product(range(r + 1), repeat=2):
            s = sum(p.mu(i) * p.eberlein(j, i) * p.eberlein(k, i) for i in range(r + 1))
            assert s == (p.size * p.sphere(j) if j == k else 0)


def test_intersection_examples_e2_24():
    p = profile(2, 4, 2)
    assert intersection_number_eberlein(1, 1, 2, p) == 9 == gaussian_binomial(2, 1, 2) ** 2
    assert intersection_number_eberlein(1, 1, 1, p) == p.coefficients.a[1]
    assert p.coefficients.b[0] == 18
    for s in range(3):
        for d in range(3):
            assert intersection_number_eberlein(0, s, d, p) == int(s == d)
            assert intersection_number_recursive(s, 0, d, p) == int(s == d)


@pytest.mark.parametrize("q,n,r", [(2, 4, 2), (2, 5, 2), (2, 6, 3), (3, 4, 2)])
def test_triple_agreement(q, n, r):
    p = profile(q, n, r)
    brute = intersection_numbers_bruteforce(q, n, r)
    for (u, s, d), v in brute.items():
        assert p.J_eberlein(u, s, d) == p.J_recursive(u, s, d) == v


def test_scheme_coefficients_match_bruteforce():
    for q, n, r in [(2, 4, 2), (2, 6, 3)]:
        p = profile(q, n, r)
        co = p.coefficients
        brute = intersection_numbers_bruteforce(q, n, r)
        for j in range(r + 1):
            assert co.a[j] >= 0
            if j >= 1:
                assert co.c[j] == brute[(1, j - 1, j)]
            if j + 1 <= r:
                assert co.b[j] == brute[(1, j + 1, j)]
            if j >= 1:
                assert co.a[j] == brute[(1, j, j)]


def test_j_u_s_u_plus_s():
    for q, n, r in [(2, 4, 2), (2, 5, 2), (2, 6, 3), (2, 8, 4), (3, 6, 3)]:
        p = profile(q, n, r)
        for u in range(r + 1):
            for s in range(r + 1 - u):
                assert p.J(u, s, u + s) == gaussian_binomial(u + s, u, q) ** 2


def test_ball_intersection_examples():
    p = profile(2, 4, 2)
    assert ball_intersection(1, 1, 2, p) == 9
    for u in range(3):
        for s in range(3):
            assert ball_intersection(u, s, 0, p) == p.ball(min(u, s))
    assert ball_intersection(1, 1, 3, profile(2, 6, 3)) == 0


def test_ball_intersection_bruteforce():
    q, n, r = 2, 4, 2
    p = profile(q, n, r)
    pts = grassmannian(q, n, r)
    for d in range(r + 1):
        U0, Ud = reference_pair(q, n, r, d)
        a = distances_to(U0, pts)
        b = distances_to(Ud, pts)
        for u in range(r + 1):
            for s in range(r + 1):
                assert p.ball_intersection(u, s, d) == int(((a <= u) & (b <= s)).sum())


@pytest.mark.parametrize("q,n,r", [(2, 4, 2), (2, 5, 2), (2, 6, 3), (3, 4, 2), (2, 10, 5), (4, 8, 4)])
def test_ball_intersection_monotone_in_d(q, n, r):
    p = profile(q, n, r)
    for u, s, d in itertools.product(range(r + 1), range(r + 1), range(r)):
        assert p.ball_intersection(u, s, d) >= p.ball_intersection(u, s, d + 1)


# -- union bound -------------------------------------------------------------

def test_union_volume_examples():
    p = profile(2, 4, 2)
    for rho in range(3):
        assert union_volume_bound(1, rho, p) == p.ball(rho)
    assert union_volume_bound(2, 1, p) == 29 == 2 * 19 - 9
    for K in range(1, 40):
        for rho in range(3):
            assert union_volume_bound(K, rho, p) <= K * p.ball(rho)


def test_union_volume_bounds_actual_unions():
    q, n, r = 2, 4, 2
    p = profile(q, n, r)
    pts = grassmannian(q, n, r)
    rng = random.Random(5)
    balls = {U: frozenset(V for V in pts if injection_distance(U, V) <= 1) for U in pts}
    U0, U2 = reference_pair(q, n, r, 2)
    assert len(balls[U0] | balls[U2]) == 29
    for _ in range(300):
        K = rng.randint(1, 12)
        centers = rng.sample(pts, K)
        union = frozenset().union(*(balls[c] for c in centers))
        assert len(union) <= union_volume_bound(K, 1, p)
