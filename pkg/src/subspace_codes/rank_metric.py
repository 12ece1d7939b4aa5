"""Rank-metric codes: Gabidulin MRD codes, counting formulas and rank covering."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import _cover, _gf2batch
from .ff import GF, FqMatrix, extension_field, nullspace, rank
from .grassmann import DEFAULT_ENUMERATION_CAP, ResourceLimitError, gaussian_binomial

GREEDY_CAP = 1 << 16


def rank_distance(C: FqMatrix, D: FqMatrix) -> int:
    if C.shape != D.shape:
        raise ValueError(f"shape mismatch {C.shape} vs {D.shape}")
    return rank(C - D)


def nr(q: int, m: int, n: int, d: int) -> int:
    """N_R(q, m, n, d): m x n matrices of rank exactly d."""
    if d < 0 or d > min(m, n):
        return 0
    out = gaussian_binomial(n, d, q)
    for i in range(d):
        out *= q ** m - q ** i
    return out


def vr(q: int, m: int, n: int, t: int) -> int:
    """V_R(q, m, n, t): matrices of rank at most t."""
    return sum(nr(q, m, n, d) for d in range(0, min(t, m, n) + 1))


def nr_vr(q: int, m: int, n: int, d: int) -> tuple[int, int]:
    return nr(q, m, n, d), vr(q, m, n, d)


def mrd_cardinality(q: int, m: int, n: int, d: int) -> int:
    return min(q ** (m * (n - d + 1)), q ** (n * (m - d + 1)))


class MrdCode:
    """Gabidulin code of m x n matrices over GF(q) with minimum rank distance d.

    Direct orientation (n <= m): codewords are evaluations of linearized
    polynomials of q-degree < k = n - d + 1 at the points x^0..x^{n-1} of
    GF(q^m); column j of a codeword holds the coordinates of the j-th value.
    When n > m the code is the transpose of the direct (n x m) code.
    """

    def __init__(self, q: int, m: int, n: int, d: int):
        if not (1 <= d <= min(m, n)):
            raise ValueError(f"need 1 <= d <= min(m, n), got m={m}, n={n}, d={d}")
        self.q, self.m, self.n, self.d = q, m, n, d
        self.transposed = n > m
        self.rows, self.cols = (n, m) if self.transposed else (m, n)
        self.base = GF(q)
        self.ext = extension_field(self.base, self.rows)
        self.k = self.cols - d + 1
        self.points = tuple(self.ext.from_vector([int(i == j) for i in range(self.rows)])
                            for j in range(self.cols))
        self.t = (d - 1) // 2

    def __repr__(self):
        return f"MrdCode(q={self.q}, m={self.m}, n={self.n}, d={self.d})"

    @property
    def orientation(self) -> str:
        return "transposed" if self.transposed else "direct"

    @property
    def size(self) -> int:
        return self.ext.order ** self.k

    def __len__(self) -> int:
        return self.size

    # -- encoding ---------------------------------------------------------
    def _values(self, coeffs: Sequence[int]) -> list[int]:
        E = self.ext
        out = []
        for g in self.points:
            acc, gp = 0, g
            for c in coeffs:
                if c:
                    acc = E.add(acc, E.mul(c, gp))
                gp = E.frobenius(gp)
            out.append(acc)
        return out

    def _matrix(self, values: Sequence[int]) -> FqMatrix:
        cols = [self.ext.to_vector(v) for v in values]
        M = FqMatrix._trusted(self.base, tuple(tuple(c[i] for c in cols) for i in range(self.rows)),
                              self.cols)
        return M.T if self.transposed else M

    def message_from_index(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise IndexError(f"message index {index} out of range for {self.size} codewords")
        Q = self.ext.order
        out = []
        for _ in range(self.k):
            index, c = divmod(index, Q)
            out.append(c)
        return tuple(out)

    def encode(self, message: int | Sequence[int]) -> FqMatrix:
        if isinstance(message, (int, np.integer)):
            message = self.message_from_index(int(message))
        if len(message) != self.k:
            raise ValueError(f"message needs {self.k} coordinates")
        if any(not 0 <= c < self.ext.order for c in message):
            raise ValueError("message coordinate outside the extension field")
        return self._matrix(self._values(message))

    def words(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[FqMatrix]:
        if self.size > cap:
            raise ResourceLimitError(f"code has {self.size} words, cap is {cap}")
        for i in range(self.size):
            yield self.encode(i)

    # -- decoding ---------------------------------------------------------
    def decode(self, R: FqMatrix) -> FqMatrix | None:
        """Bounded rank-distance decoding; None on failure."""
        res = self.decode_message(R)
        return None if res is None else res[1]

    def decode_message(self, R: FqMatrix) -> tuple[tuple[int, ...], FqMatrix] | None:
        if R.shape != (self.m, self.n):
            raise ValueError(f"received matrix has shape {R.shape}, expected {(self.m, self.n)}")
        Rd = R.T if self.transposed else R
        y = [self.ext.from_vector(Rd.rows[i][j] for i in range(self.rows)) for j in range(self.cols)]
        f = self._welch_berlekamp(y, self.t)
        if f is None:
            return None
        C = self._matrix(self._values(f))
        if rank(R - C) > self.t:
            return None
        return f, C

    def _welch_berlekamp(self, y: Sequence[int], t: int) -> tuple[int, ...] | None:
        # V(y_j) = N(g_j), V of q-degree <= t, N of q-degree <= k+t-1; then N = V o f.
        E, k = self.ext, self.k
        rows = []
        for yj, gj in zip(y, self.points):
            row, yp = [], yj
            for _ in range(t + 1):
                row.append(yp)
                yp = E.frobenius(yp)
            gp = gj
            for _ in range(k + t):
                row.append(E.neg(gp))
                gp = E.frobenius(gp)
            rows.append(row)
        ns = nullspace(FqMatrix._trusted(E, tuple(map(tuple, rows)), 2 * t + k + 1))
        if ns.nrows == 0:
            return None
        sol = ns.rows[0]
        v, Ncoef = sol[:t + 1], sol[t + 1:]
        tau = max((i for i, c in enumerate(v) if c), default=-1)
        if tau < 0:
            return None
        f = [0] * k
        for j in range(k - 1, -1, -1):
            acc = Ncoef[tau + j] if tau + j < len(Ncoef) else 0
            for i in range(tau):
                l = tau + j - i
                if l < k and v[i] and f[l]:
                    acc = E.sub(acc, E.mul(v[i], E.frobenius(f[l], i)))
            f[j] = E.frobenius(E.div(acc, v[tau]), -tau)
        # verify V o f == N coefficientwise
        comp = [0] * (t + k + 1)
        for i, a in enumerate(v):
            if a:
                for l, b in enumerate(f):
                    if b:
                        comp[i + l] = E.add(comp[i + l], E.mul(a, E.frobenius(b, i)))
        if any(comp[s] != (Ncoef[s] if s < len(Ncoef) else 0) for s in range(len(comp))):
            return None
        return tuple(f)

    def decode_exhaustive(self, R: FqMatrix) -> FqMatrix | None:
        """Unique codeword within radius t by scanning the whole code."""
        best = [C for C in self.words() if rank(R - C) <= self.t]
        return best[0] if len(best) == 1 else None

    def contains(self, M: FqMatrix) -> bool:
        if M.shape != (self.m, self.n) or M.field != self.base:
            return False
        return self.decode(M) == M


def build_mrd(q: int, m: int, n: int, d: int) -> MrdCode:
    return MrdCode(q, m, n, d)


def mrd_encode(code: MrdCode, message) -> FqMatrix:
    return code.encode(message)


def mrd_decode_rank(code: MrdCode, R: FqMatrix) -> FqMatrix | None:
    return code.decode(R)


# -- explicit codebooks ------------------------------------------------------

def all_matrices(q: int, m: int, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[FqMatrix]:
    """Every m x n matrix over GF(q) in lexicographic order of the row-major entries."""
    total = q ** (m * n)
    if total > cap:
        raise ResourceLimitError(f"q^(mn) = {total} exceeds cap {cap}")
    F = GF(q)
    for vals in itertools.product(range(q), repeat=m * n):
        yield FqMatrix._trusted(F, tuple(vals[i * n:(i + 1) * n] for i in range(m)), n)


def matrix_index(M: FqMatrix) -> int:
    """Position of M in the all_matrices order."""
    q = M.field.order
    idx = 0
    for row in M.rows:
        for v in row:
            idx = idx * q + v
    return idx


@dataclass
class RankCodebook:
    q: int
    m: int
    n: int
    words: tuple[FqMatrix, ...] = field(default_factory=tuple)

    def __post_init__(self):
        self.words = tuple(sorted(set(self.words), key=matrix_index))
        for W in self.words:
            if W.shape != (self.m, self.n) or W.field.order != self.q:
                raise ValueError("codebook words must share shape m x n over GF(q)")

    def __len__(self):
        return len(self.words)

    @classmethod
    def zero(cls, q: int, m: int, n: int) -> "RankCodebook":
        return cls(q, m, n, (FqMatrix.zeros(GF(q), m, n),))

    @classmethod
    def from_mrd(cls, code: MrdCode) -> "RankCodebook":
        return cls(code.q, code.m, code.n, tuple(code.words()))

    def decode(self, R: FqMatrix, radius: int | None = None) -> FqMatrix | None:
        """Exhaustive nearest word; None when the nearest word is not unique or too far."""
        dists = [rank_distance(R, W) for W in self.words]
        if not dists:
            return None
        best = min(dists)
        if radius is not None and best > radius:
            return None
        hits = [W for W, d in zip(self.words, dists) if d == best]
        return hits[0] if len(hits) == 1 else None


def _rank_table(q: int, m: int, n: int) -> np.ndarray:
    """rank of every matrix in all_matrices order (q = 2 vectorised)."""
    total = q ** (m * n)
    if q == 2:
        idx = np.arange(total, dtype=np.uint64)
        rows = np.stack([(idx >> np.uint64(n * (m - 1 - i))) & np.uint64((1 << n) - 1)
                         for i in range(m)], axis=1)
        return _gf2batch.batch_rank(rows, n)
    return np.array([rank(M) for M in all_matrices(q, m, n)], dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _rank_table_cached(q: int, m: int, n: int) -> np.ndarray:
    t = _rank_table(q, m, n)
    t.setflags(write=False)
    return t


def _digits(idx: np.ndarray, q: int, L: int) -> np.ndarray:
    out = np.empty((len(idx), L), dtype=np.int64)
    x = idx.copy()
    for i in range(L - 1, -1, -1):
        out[:, i] = x % q
        x //= q
    return out


def _from_digits(dig: np.ndarray, q: int) -> np.ndarray:
    out = np.zeros(len(dig), dtype=np.int64)
    for i in range(dig.shape[1]):
        out = out * q + dig[:, i]
    return out


def _difference_indices(q: int, m: int, n: int, w: int) -> np.ndarray:
    """Index of X - W for every X, where W has index w."""
    total = q ** (m * n)
    L = m * n
    if q == 2:
        return np.arange(total, dtype=np.int64) ^ w
    F = GF(q)
    X = _digits(np.arange(total, dtype=np.int64), q, L)
    W = _digits(np.array([w], dtype=np.int64), q, L)[0]
    if F.base is None:
        D = (X - W[None, :]) % q
    else:
        sub = np.array([[F.sub(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
        D = sub[X, W[None, :]]
    return _from_digits(D, q)


def _ball_masks(q: int, m: int, n: int, rho: int) -> list[int]:
    """Bitmask of the radius-rho rank ball around every matrix."""
    total = q ** (m * n)
    ranks = _rank_table_cached(q, m, n)
    ball0 = np.nonzero(ranks <= rho)[0]
    masks = []
    for w in range(total):
        if q == 2:
            members = ball0 ^ w
        else:
            members = np.nonzero(ranks[_difference_indices(q, m, n, w)] <= rho)[0]
        x = 0
        for i in members.tolist():
            x |= 1 << i
        masks.append(x)
    return masks


def rank_covering_radius(book: RankCodebook, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    q, m, n = book.q, book.m, book.n
    total = q ** (m * n)
    if total > cap:
        raise ResourceLimitError(f"q^(mn) = {total} exceeds cap {cap}")
    if not book.words:
        raise ValueError("empty codebook has no covering radius")
    ranks = _rank_table_cached(q, m, n)
    best = np.full(total, min(m, n) + 1, dtype=np.int64)
    for W in book.words:
        w = matrix_index(W)
        best = np.minimum(best, ranks[_difference_indices(q, m, n, w)])
    return int(best.max())


def greedy_rank_covering(q: int, m: int, n: int, rho: int, cap: int = GREEDY_CAP) -> RankCodebook:
    """Greedy max-coverage rank covering code; ties go to the lexicographically smallest matrix."""
    total = q ** (m * n)
    if total > cap:
        raise ResourceLimitError(f"q^(mn) = {total} exceeds greedy cap {cap}")
    if rho >= min(m, n):
        return RankCodebook.zero(q, m, n)
    masks = _ball_masks(q, m, n, rho)
    chosen = _cover.greedy_cover(masks, (1 << total) - 1)
    mats = list(all_matrices(q, m, n))
    return RankCodebook(q, m, n, tuple(mats[i] for i in chosen))


def exact_kr(q: int, m: int, n: int, rho: int, cap: int = 1 << 12, node_limit: int = 10 ** 7
             ) -> RankCodebook:
    """A minimum rank covering code by exhaustive search (translation symmetry fixes 0)."""
    total = q ** (m * n)
    if total > cap:
        raise ResourceLimitError(f"q^(mn) = {total} exceeds exact-search cap {cap}")
    if rho >= min(m, n):
        return RankCodebook.zero(q, m, n)
    masks = _ball_masks(q, m, n, rho)
    V = vr(q, m, n, rho)
    lower = -(-total // V)
    chosen = _cover.exact_min_cover(masks, (1 << total) - 1, lower=lower, fixed=0,
                                    node_limit=node_limit)
    mats = list(all_matrices(q, m, n))
    return RankCodebook(q, m, n, tuple(mats[i] for i in chosen))


def kr_upper(q: int, m: int, n: int, rho: int) -> tuple[int, str]:
    """An upper bound on K_R(q^m, n, rho) with the method that produced it.

    Uses the exact search for tiny spaces, the greedy code when the space
    fits the greedy cap, and otherwise the truncation code (all matrices
    supported on min(m,n) - rho columns or rows).
    """
    if rho >= min(m, n):
        return 1, "trivial"
    total = q ** (m * n)
    if total <= 1 << 6:
        try:
            return len(exact_kr(q, m, n, rho, node_limit=10 ** 6)), "exact"
        except _cover.SearchLimitError:
            pass
    if total <= 1 << 12:
        return len(greedy_rank_covering(q, m, n, rho)), "greedy"
    return q ** (max(m, n) * (min(m, n) - rho)), "truncation"
