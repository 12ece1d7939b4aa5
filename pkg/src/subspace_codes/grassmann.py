"""Subspaces of GF(q)^n, the subspace and injection metrics, and the
counting formulas of the Grassmann association scheme.

All counts are exact Python integers.  The constant ``K_q`` is the only
floating-point quantity and is used exclusively in inequality checks.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import _gf2batch
from .ff import (GF, FiniteField, FqMatrix, gf2_rank, nullspace, pack_row, rank, rref,
                 vstack)

DEFAULT_ENUMERATION_CAP = 10 ** 7


class ResourceLimitError(RuntimeError):
    """Raised when an exhaustive computation would exceed its configured cap."""


class Subspace:
    """A subspace of GF(q)^n stored as its canonical reduced echelon basis."""

    __slots__ = ("field", "n", "basis", "pivots", "_packed", "_hash")

    def __init__(self, generator: FqMatrix):
        basis, _, pivots = rref(generator)
        self._set(generator.field, generator.ncols, basis, pivots)

    def _set(self, field, n, basis, pivots):
        self.field = field
        self.n = n
        self.basis = basis
        self.pivots = pivots
        self._packed = None
        self._hash = None

    @classmethod
    def _trusted(cls, basis: FqMatrix, pivots: tuple[int, ...]) -> "Subspace":
        U = cls.__new__(cls)
        U._set(basis.field, basis.ncols, basis, pivots)
        return U

    @classmethod
    def span(cls, field: FiniteField, rows: Sequence[Sequence[int]], n: int) -> "Subspace":
        return cls(FqMatrix(field, rows, n))

    @classmethod
    def zero(cls, field: FiniteField, n: int) -> "Subspace":
        return cls._trusted(FqMatrix.zeros(field, 0, n), ())

    @classmethod
    def full(cls, field: FiniteField, n: int) -> "Subspace":
        return cls._trusted(FqMatrix.identity(field, n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def packed(self) -> list[int]:
        if self._packed is None:
            self._packed = [pack_row(r) for r in self.basis.rows]
        return self._packed

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.q == other.q and self.basis.rows == other.basis.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.q, self.n, self.basis.rows))
        return self._hash

    def __lt__(self, other: "Subspace") -> bool:
        return (self.dim, self.pivots, self.basis.rows) < (other.dim, other.pivots, other.basis.rows)

    def __repr__(self) -> str:
        body = "; ".join("".join(map(str, r)) if self.q <= 10 else " ".join(map(str, r))
                         for r in self.basis.rows)
        return f"Subspace(q={self.q}, n={self.n}, dim={self.dim}, [{body}])"

    def contains_vector(self, v: Sequence[int]) -> bool:
        return rank(vstack(self.basis, FqMatrix(self.field, [v], self.n))) == self.dim


def gaussian_binomial(n: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of GF(q)^n (0 outside 0 <= r <= n)."""
    if r < 0 or r > n or n < 0:
        return 0
    num = den = 1
    for i in range(r):
        num *= q ** n - q ** i
        den *= q ** r - q ** i
    return num // den


def _join_rank(U: Subspace, V: Subspace) -> int:
    if U.n != V.n or U.q != V.q:
        raise ValueError("subspaces live in different ambient spaces")
    if U.q == 2:
        return gf2_rank(U.packed + V.packed)
    return rank(vstack(U.basis, V.basis))


def subspace_distance(U: Subspace, V: Subspace) -> int:
    return 2 * _join_rank(U, V) - U.dim - V.dim


def injection_distance(U: Subspace, V: Subspace) -> int:
    return _join_rank(U, V) - min(U.dim, V.dim)


def matrix_space_distance(A: FqMatrix, B: FqMatrix) -> tuple[int, int]:
    """``(d_S, d_I)`` between the row spaces of A and B, straight from ranks."""
    if A.ncols != B.ncols:
        raise ValueError("column counts differ")
    ra, rb, rab = rank(A), rank(B), rank(vstack(A, B))
    return 2 * rab - ra - rb, rab - min(ra, rb)


def dual(U: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product."""
    if U.dim == 0:
        return Subspace.full(U.field, U.n)
    N = nullspace(U.basis)
    return Subspace._trusted(*rref(N)[::2])


def enumerate_grassmannian(q: int, n: int, r: int, cap: int = DEFAULT_ENUMERATION_CAP
                           ) -> Iterator[Subspace]:
    """Every r-dimensional subspace of GF(q)^n exactly once, as canonical rref.

    Ordered by pivot set (lexicographic), then by free entries (lexicographic).
    """
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    total = gaussian_binomial(n, r, q)
    if total > cap:
        raise ResourceLimitError(f"[{n} {r}]_{q} = {total} exceeds enumeration cap {cap}")
    F = GF(q)
    for piv in itertools.combinations(range(n), r):
        pset = set(piv)
        free = [(i, j) for i, p in enumerate(piv) for j in range(p + 1, n) if j not in pset]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(r)]
            for i, p in enumerate(piv):
                rows[i][p] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield Subspace._trusted(FqMatrix._trusted(F, tuple(map(tuple, rows)), n), piv)


def grassmannian(q: int, n: int, r: int, cap: int = DEFAULT_ENUMERATION_CAP) -> list[Subspace]:
    return list(enumerate_grassmannian(q, n, r, cap))


def subspace_neighbours(U: Subspace) -> Iterator[Subspace]:
    """All subspaces at subspace distance exactly 1 from U.

    These are the hyperplanes of U and the subspaces U + <v> for v outside U.
    """
    F, n, r = U.field, U.n, U.dim
    if r > 0:
        for H in enumerate_grassmannian(F.order, r, r - 1):
            yield Subspace(H.basis @ U.basis) if r > 1 else Subspace.zero(F, n)
    free = [j for j in range(n) if j not in U.pivots]
    for w in enumerate_grassmannian(F.order, len(free), 1) if free else ():
        v = [0] * n
        for j, x in zip(free, w.basis.rows[0]):
            v[j] = x
        yield Subspace(vstack(U.basis, FqMatrix._trusted(F, (tuple(v),), n)))


def packed_array(subspaces: Sequence[Subspace]) -> np.ndarray:
    """``(len, dim)`` uint64 array of packed GF(2) bases (all of equal dim)."""
    if not subspaces:
        return np.zeros((0, 0), dtype=np.uint64)
    return np.array([U.packed for U in subspaces], dtype=np.uint64).reshape(len(subspaces), -1)


def _join_ranks(X: Sequence[Subspace], Y: Sequence[Subspace]) -> np.ndarray:
    """``dim(X[i] + Y[j])`` for two equal-dimension families."""
    n, dx, dy = X[0].n, X[0].dim, Y[0].dim
    if X[0].q == 2 and n <= _gf2batch.BITSET_MAX_COLS:
        SX = _gf2batch.span_bitsets(packed_array(X), n)
        SY = SX if X is Y else _gf2batch.span_bitsets(packed_array(Y), n)
        return dx + dy - _gf2batch.pair_intersection_dims(SX, SY)
    if X[0].q == 2 and n <= 64:
        return _gf2batch.pair_ranks(packed_array(X), packed_array(Y), n)
    return np.array([[_join_rank(U, V) for V in Y] for U in X], dtype=np.int64)


def pairwise_injection_distances(X: Sequence[Subspace], Y: Sequence[Subspace]) -> np.ndarray:
    """``D[i, j] = d_I(X[i], Y[j])`` for equal-dimension families."""
    if not X or not Y:
        return np.zeros((len(X), len(Y)), dtype=np.int64)
    dx, dy = X[0].dim, Y[0].dim
    if any(U.dim != dx for U in X) or any(V.dim != dy for V in Y):
        raise ValueError("pairwise_injection_distances needs equal-dimension families")
    return _join_ranks(X, Y) - min(dx, dy)


def distances_to(U: Subspace, family: Sequence[Subspace], metric: str = "injection") -> np.ndarray:
    """Distances from U to each member of a family (dimensions may vary)."""
    if metric not in ("subspace", "injection"):
        raise ValueError(f"unknown metric {metric!r}")
    if not family:
        return np.zeros(0, dtype=np.int64)
    s = family[0].dim
    if U.q == 2 and U.n <= 64 and U.dim and s and all(V.dim == s for V in family):
        joins = _join_ranks([U], family)[0]
        dims = np.full(len(family), s, dtype=np.int64)
    else:
        joins = np.array([_join_rank(U, V) for V in family], dtype=np.int64)
        dims = np.array([V.dim for V in family], dtype=np.int64)
    if metric == "subspace":
        return 2 * joins - U.dim - dims
    return joins - np.minimum(U.dim, dims)


def distance_histogram(U: Subspace, family: Sequence[Subspace]) -> Counter:
    return Counter(int(d) for d in distances_to(U, family))


def kq_constant(q: int) -> float:
    """``prod_{j>=1} (1 - q^-j)``, truncated once a factor is within 1e-15 of 1."""
    prod, j = 1.0, 1
    while True:
        term = q ** (-j)
        prod *= 1.0 - term
        if term < 1e-15 or j >= 64:
            return prod
        j += 1


@dataclass(frozen=True)
class SchemeCoefficients:
    r: int
    n: int
    q: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]


class GrassmannProfile:
    """Cached counting data for the Grassmannian E_r(q, n)."""

    def __init__(self, q: int, n: int, r: int):
        if not 0 <= r <= n:
            raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
        self.q, self.n, self.r = q, n, r

    def __repr__(self):
        return f"GrassmannProfile(q={self.q}, n={self.n}, r={self.r})"

    def gb(self, a: int, b: int) -> int:
        return gaussian_binomial(a, b, self.q)

    @functools.cached_property
    def size(self) -> int:
        return self.gb(self.n, self.r)

    @functools.cached_property
    def kq(self) -> float:
        return kq_constant(self.q)

    @functools.lru_cache(maxsize=None)
    def sphere(self, d: int) -> int:
        """N_C(d): subspaces at injection distance d from a fixed one."""
        if d < 0 or d > self.r:
            return 0
        q, n, r = self.q, self.n, self.r
        return q ** (d * d) * self.gb(r, d) * self.gb(n - r, d)

    @functools.lru_cache(maxsize=None)
    def ball(self, t: int) -> int:
        """V_C(t)."""
        return sum(self.sphere(d) for d in range(0, min(t, self.r) + 1))

    def mu(self, i: int) -> int:
        return self.gb(self.n, i) - self.gb(self.n, i - 1)

    @functools.lru_cache(maxsize=None)
    def eberlein(self, j: int, i: int) -> int:
        """q-Eberlein polynomial E_j(i): eigenvalue of distance-j adjacency on eigenspace i.

        Uses the factor [r-i, l]; the alternative [r-l, i] breaks E_0(i) = 1
        and E_j(0) = N_C(j).
        """
        q, n, r = self.q, self.n, self.r
        total = 0
        for l in range(j + 1):
            term = (q ** (l * i + math.comb(j - l, 2)) * self.gb(r - l, r - j)
                    * self.gb(r - i, l) * self.gb(n - r + l - i, l))
            total += -term if (j - l) % 2 else term
        return total

    @functools.lru_cache(maxsize=None)
    def J_eberlein(self, u: int, s: int, d: int) -> int:
        r = self.r
        if not all(0 <= x <= r for x in (u, s, d)):
            return 0
        num = sum(self.mu(i) * self.eberlein(u, i) * self.eberlein(s, i) * self.eberlein(d, i)
                  for i in range(r + 1))
        den = self.size * self.sphere(d)
        if num % den:
            raise ArithmeticError(f"Eberlein sum for J({u},{s},{d}) not divisible: {num}/{den}")
        return num // den

    @functools.cached_property
    def coefficients(self) -> SchemeCoefficients:
        q, n, r = self.q, self.n, self.r
        c = tuple(self.gb(j, 1) ** 2 for j in range(r + 1))
        b = tuple(q ** (2 * j + 1) * self.gb(r - j, 1) * self.gb(n - r - j, 1) for j in range(r + 1))
        a = tuple(self.sphere(1) - b[j] - c[j] for j in range(r + 1))
        return SchemeCoefficients(r, n, q, a, b, c)

    @functools.lru_cache(maxsize=None)
    def _recursion_table(self, d: int) -> tuple[tuple[int, ...], ...]:
        r = self.r
        co = self.coefficients
        a = lambda j: co.a[j] if 0 <= j <= r else 0
        b = lambda j: co.b[j] if 0 <= j <= r else 0
        c = lambda j: co.c[j] if 0 <= j <= r else 0
        J = [[int(s == d) for s in range(r + 1)]]
        get = lambda u, s: J[u][s] if 0 <= u < len(J) and 0 <= s <= r else 0
        for u in range(r):
            row = []
            for s in range(r + 1):
                num = (b(s - 1) * get(u, s - 1) + (a(s) - a(u)) * get(u, s)
                       + c(s + 1) * get(u, s + 1) - b(u - 1) * get(u - 1, s))
                if num % c(u + 1):
                    raise ArithmeticError(f"recursion division inexact at u={u + 1}, s={s}, d={d}")
                row.append(num // c(u + 1))
            J.append(row)
        return tuple(tuple(row) for row in J)

    def J_recursive(self, u: int, s: int, d: int) -> int:
        r = self.r
        if not all(0 <= x <= r for x in (u, s, d)):
            return 0
        return self._recursion_table(d)[u][s]

    def J(self, u: int, s: int, d: int) -> int:
        return self.J_recursive(u, s, d)

    @functools.lru_cache(maxsize=None)
    def ball_intersection(self, u: int, s: int, d: int) -> int:
        """I_C(u, s, d): size of the intersection of two balls."""
        u, s = min(u, self.r), min(s, self.r)
        return sum(self.J(i, j, d) for i in range(u + 1) for j in range(s + 1))

    def vc_bounds(self, t: int) -> tuple[int, float]:
        """``(q^{t(n-t)}, K_q^-2 q^{t(n-t)})`` bracketing V_C(t) when r <= n/2."""
        low = self.q ** (t * (self.n - t))
        return low, low / self.kq ** 2

    def ac_upper(self, d: int) -> int:
        """Upper bound on A_C(q, n, r, d) used inside the union bound.

        d = 1 gives the whole Grassmannian, d = r + 1 is the single-ball
        convention 1, and 2 <= d <= r uses ``[n, r-d+1] / [r, r-d+1]`` floored.
        """
        r = self.r
        if d <= 1:
            return self.size
        if d > r:
            return 1
        k = r - d + 1
        return self.gb(self.n, k) // self.gb(r, k)

    def union_volume_bound(self, K: int, rho: int, ac_upper: Callable[[int], int] | None = None) -> int:
        """B_C(K, rho): upper bound on the union of any K balls of radius rho."""
        if K < 1:
            raise ValueError("K must be >= 1")
        A = ac_upper or self.ac_upper
        r = self.r
        l = max(a for a in range(0, r + 1) if K >= A(r - a + 1))
        B = K * self.ball(rho)
        for a in range(1, l + 1):
            B -= (A(r - a + 1) - A(r - a + 2)) * self.ball_intersection(rho, rho, r - a + 1)
        B -= (K - A(r - l + 1)) * self.ball_intersection(rho, rho, r - l)
        return B


@functools.lru_cache(maxsize=None)
def profile(q: int, n: int, r: int) -> GrassmannProfile:
    return GrassmannProfile(q, n, r)


# module-level spellings of the profile formulas

def sphere_size(p: GrassmannProfile, d: int) -> int:
    return p.sphere(d)


def ball_volume(p: GrassmannProfile, t: int) -> int:
    return p.ball(t)


def vc_bounds_check(p: GrassmannProfile, t: int) -> tuple[int, float]:
    return p.vc_bounds(t)


def eberlein(j: int, i: int, p: GrassmannProfile) -> int:
    return p.eberlein(j, i)


def intersection_number_eberlein(u: int, s: int, d: int, p: GrassmannProfile) -> int:
    return p.J_eberlein(u, s, d)


def intersection_number_recursive(u: int, s: int, d: int, p: GrassmannProfile) -> int:
    return p.J_recursive(u, s, d)


def ball_intersection(u: int, s: int, d: int, p: GrassmannProfile) -> int:
    return p.ball_intersection(u, s, d)


def union_volume_bound(K: int, rho: int, p: GrassmannProfile,
                       ac_upper: Callable[[int], int] | None = None) -> int:
    return p.union_volume_bound(K, rho, ac_upper)


def reference_pair(q: int, n: int, r: int, d: int) -> tuple[Subspace, Subspace]:
    """``(R(I_r | 0), R(I_r | P_d))`` with P_d = diag(I_d, 0): two points at distance d."""
    F = GF(q)
    rows0 = [[int(i == j) for j in range(r)] + [0] * (n - r) for i in range(r)]
    rowsd = [row[:r] + [int(i == j and i < d) for j in range(n - r)] for i, row in enumerate(rows0)]
    return Subspace.span(F, rows0, n), Subspace.span(F, rowsd, n)


def intersection_numbers_bruteforce(q: int, n: int, r: int) -> dict[tuple[int, int, int], int]:
    """Count J_C(u, s, d) directly by sweeping E_r(q, n) around the reference pairs."""
    points = grassmannian(q, n, r)
    out: dict[tuple[int, int, int], int] = {}
    for d in range(r + 1):
        U0, Ud = reference_pair(q, n, r, d)
        du = distances_to(U0, points)
        ds = distances_to(Ud, points)
        cnt = Counter(zip(du.tolist(), ds.tolist()))
        for u in range(r + 1):
            for s in range(r + 1):
                out[(u, s, d)] = cnt.get((u, s), 0)
    return out
