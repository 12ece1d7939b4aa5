"""Constant-dimension code constructions: liftings, KK and augmented KK codes,
length/dimension expansions and permuted-lifting covering codes."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .ff import GF, FqMatrix, hstack, rank, vstack
from .grassmann import (DEFAULT_ENUMERATION_CAP, ResourceLimitError, Subspace, gaussian_binomial,
                        packed_array, pairwise_injection_distances, profile)
from .rank_metric import MrdCode, RankCodebook, mrd_cardinality


def lift(C: FqMatrix) -> Subspace:
    """I(C): the row space of (I_r | C)."""
    r = C.nrows
    F = C.field
    rows = tuple(tuple(int(i == j) for j in range(r)) + C.rows[i] for i in range(r))
    return Subspace._trusted(FqMatrix._trusted(F, rows, r + C.ncols), tuple(range(r)))


@dataclass(frozen=True)
class PivotSet:
    """Column positions J (sorted) that receive the identity block of a permuted lifting."""

    J: tuple[int, ...]
    n: int

    def __post_init__(self):
        J = tuple(sorted(self.J))
        if len(set(J)) != len(J) or any(not 0 <= j < self.n for j in J):
            raise ValueError(f"invalid pivot set {self.J} for n={self.n}")
        object.__setattr__(self, "J", J)

    @property
    def r(self) -> int:
        return len(self.J)

    @property
    def permutation(self) -> tuple[int, ...]:
        """pi with pi(0) < ... < pi(r-1) listing J and pi(r) < ... < pi(n-1) the rest."""
        rest = tuple(j for j in range(self.n) if j not in self.J)
        return self.J + rest


def permuted_lift(J: PivotSet, C: FqMatrix) -> Subspace:
    """I(J, C): (I_r | C) with column i moved to position pi(i)."""
    r, n = J.r, J.n
    if C.shape != (r, n - r):
        raise ValueError(f"C must be {r} x {n - r}")
    pi = J.permutation
    rows = []
    for i in range(r):
        src = [int(i == j) for j in range(r)] + list(C.rows[i])
        row = [0] * n
        for c, v in enumerate(src):
            row[pi[c]] = v
        rows.append(row)
    return Subspace(FqMatrix(C.field, rows, n))


def pivot_decomposition(U: Subspace) -> tuple[PivotSet, FqMatrix]:
    """(J, C) with U = I(J, C) where J is the rref pivot set of U."""
    J = PivotSet(U.pivots, U.n)
    rest = J.permutation[J.r:]
    return J, U.basis.columns(rest)


class LiftedCode:
    """Lifting of a rank-metric code in GF(q)^{rows x cols}: an MRD code or the zero code."""

    def __init__(self, q: int, rows: int, cols: int, d: int, mrd: MrdCode | None):
        self.q, self.rows, self.cols, self.d = q, rows, cols, d
        self.mrd = mrd
        self.field = GF(q)

    @classmethod
    def build(cls, q: int, rows: int, cols: int, d: int, zero: bool = False) -> "LiftedCode":
        if zero or rows == 0 or cols == 0 or d > min(rows, cols):
            return cls(q, rows, cols, d, None)
        return cls(q, rows, cols, d, MrdCode(q, rows, cols, d))

    @property
    def n(self) -> int:
        return self.rows + self.cols

    @property
    def size(self) -> int:
        return 1 if self.mrd is None else self.mrd.size

    def __len__(self):
        return self.size

    def matrix(self, index: int) -> FqMatrix:
        if self.mrd is None:
            if index != 0:
                raise IndexError(index)
            return FqMatrix.zeros(self.field, self.rows, self.cols)
        return self.mrd.encode(index)

    def matrices(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[FqMatrix]:
        if self.size > cap:
            raise ResourceLimitError(f"lifted code has {self.size} words, cap is {cap}")
        for i in range(self.size):
            yield self.matrix(i)

    @functools.cached_property
    def words(self) -> tuple[Subspace, ...]:
        return tuple(lift(C) for C in self.matrices())

    @functools.cached_property
    def packed(self) -> np.ndarray:
        return packed_array(self.words)

    def contains_matrix(self, C: FqMatrix) -> bool:
        if self.mrd is None:
            return C.is_zero()
        return self.mrd.contains(C)


@dataclass
class Cdc:
    """A constant-dimension code: equal-dimension subspaces of GF(q)^n."""

    q: int
    n: int
    r: int
    words: tuple[Subspace, ...]
    declared_d: int | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        seen = dict.fromkeys(self.words)
        self.words = tuple(seen)
        for U in self.words:
            if U.n != self.n or U.dim != self.r or U.q != self.q:
                raise ValueError("all codewords must lie in E_r(q, n)")

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, U):
        return U in self._set

    @functools.cached_property
    def _set(self):
        return frozenset(self.words)

    def min_distance(self, cap: int = 10 ** 4) -> int | None:
        """Minimum pairwise injection distance; None for fewer than two words."""
        if len(self.words) < 2:
            return None
        if len(self.words) > cap:
            raise ResourceLimitError(f"{len(self.words)} words exceeds pairwise cap {cap}")
        D = pairwise_injection_distances(self.words, self.words)
        np.fill_diagonal(D, self.r + 1)
        return int(D.min())

    def verify_declared(self, cap: int = 10 ** 4) -> bool:
        return self.declared_d is None or self.min_distance(cap) == self.declared_d


def kk_code(q: int, n: int, r: int, d: int) -> Cdc:
    """Lifting of a Gabidulin code in GF(q)^{r x (n-r)} with minimum rank distance d."""
    if not (1 <= d <= min(r, n - r)):
        raise ValueError(f"need 1 <= d <= min(r, n-r), got n={n}, r={r}, d={d}")
    layer = LiftedCode.build(q, r, n - r, d)
    return Cdc(q, n, r, layer.words, d, {"construction": "kk", "d": d})


def kk_cardinality(q: int, n: int, r: int, d: int) -> int:
    return q ** ((n - r) * (r - d + 1))


class AugmentedKK:
    """Union of the KK layer E^0 and layers E^k, 1 <= k <= floor(r/d).

    A layer-k word is the row space of
        [ I_{r-kd}  C   0      D_top ]
        [ 0         0   I_{kd} D_bot ]
    with C in C^k (an MRD code in GF(q)^{(r-kd) x kd}, or {0} at k = floor(r/d))
    and D in D^k (an MRD code in GF(q)^{r x (n-r-kd)}, or {0} at
    k = floor((n-r)/d)); D_top is the first r-kd rows of D.
    """

    def __init__(self, q: int, n: int, r: int, d: int):
        if not (1 <= d <= r and 2 * r <= n):
            raise ValueError(f"need 1 <= d <= r <= n/2, got n={n}, r={r}, d={d}")
        self.q, self.n, self.r, self.d = q, n, r, d
        self.field = GF(q)
        self.layer0 = LiftedCode.build(q, r, n - r, d)
        self.C: dict[int, LiftedCode] = {}
        self.D: dict[int, LiftedCode] = {}
        for k in range(1, self.num_layers):
            self.C[k] = LiftedCode.build(q, r - k * d, k * d, d, zero=k > r // d - 1)
            self.D[k] = LiftedCode.build(q, r, n - r - k * d, d, zero=k > (n - r) // d - 1)

    def __repr__(self):
        return f"AugmentedKK(q={self.q}, n={self.n}, r={self.r}, d={self.d})"

    @property
    def num_layers(self) -> int:
        return self.r // self.d + 1

    def layer_size(self, k: int) -> int:
        if k == 0:
            return self.layer0.size
        return self.C[k].size * self.D[k].size

    @property
    def size(self) -> int:
        return sum(self.layer_size(k) for k in range(self.num_layers))

    def __len__(self):
        return self.size

    def cardinality_formula(self) -> int:
        """|E| from the closed-form layer counts (independent of the builders)."""
        q, n, r, d = self.q, self.n, self.r, self.d
        total = q ** ((n - r) * (r - d + 1))
        for k in range(1, r // d + 1):
            c = 1 if k == r // d else mrd_cardinality(q, r - k * d, k * d, d)
            dd = 1 if k == (n - r) // d else mrd_cardinality(q, r, n - r - k * d, d)
            total += c * dd
        return total

    def assemble(self, k: int, C: FqMatrix, D: FqMatrix) -> Subspace:
        """The layer-k word built from component matrices C and D."""
        q, n, r, d = self.q, self.n, self.r, self.d
        if k == 0:
            return lift(D)
        kd = k * d
        top = r - kd
        w = n - r - kd
        rows = []
        for i in range(top):
            rows.append(tuple(int(i == j) for j in range(top)) + C.rows[i] + (0,) * kd + D.rows[i])
        for i in range(kd):
            rows.append((0,) * r + tuple(int(i == j) for j in range(kd)) + D.rows[top + i])
        pivots = tuple(range(top)) + tuple(range(r, r + kd))
        return Subspace._trusted(FqMatrix._trusted(self.field, tuple(rows), n), pivots)

    def zero_word(self, k: int) -> Subspace:
        F = self.field
        if k == 0:
            return lift(FqMatrix.zeros(F, self.r, self.n - self.r))
        kd = k * self.d
        return self.assemble(k, FqMatrix.zeros(F, self.r - kd, kd),
                             FqMatrix.zeros(F, self.r, self.n - self.r - kd))

    def layer_words(self, k: int) -> Iterator[Subspace]:
        if k == 0:
            yield from self.layer0.words
            return
        Ds = list(self.D[k].matrices())
        for C in self.C[k].matrices():
            for D in Ds:
                yield self.assemble(k, C, D)

    def labelled_words(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[tuple[int, Subspace]]:
        if self.size > cap:
            raise ResourceLimitError(f"code has {self.size} words, cap is {cap}")
        for k in range(self.num_layers):
            for U in self.layer_words(k):
                yield k, U

    def words(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[Subspace]:
        return [U for _, U in self.labelled_words(cap)]

    def word_by_index(self, index: int) -> Subspace:
        """Codeword number ``index`` in labelled_words order."""
        if not 0 <= index < self.size:
            raise IndexError(index)
        for k in range(self.num_layers):
            sz = self.layer_size(k)
            if index < sz:
                if k == 0:
                    return lift(self.layer0.matrix(index))
                ci, di = divmod(index, self.D[k].size)
                return self.assemble(k, self.C[k].matrix(ci), self.D[k].matrix(di))
            index -= sz
        raise AssertionError("unreachable")

    def layer_of(self, U: Subspace) -> int:
        """Layer index read off the pivot pattern of a codeword."""
        r, d = self.r, self.d
        missing = sum(1 for p in U.pivots if p >= r)
        if missing % d:
            raise ValueError("not a codeword pivot pattern")
        return missing // d

    def to_cdc(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Cdc:
        return Cdc(self.q, self.n, self.r, tuple(self.words(cap)), self.d, self.metadata())

    def metadata(self) -> dict:
        """Layer boundaries and component-code shapes, recorded in code files."""
        sizes = [self.layer_size(k) for k in range(self.num_layers)]
        comps = [f"0:{self.r}x{self.n - self.r}"]
        for k in range(1, self.num_layers):
            C, D = self.C[k], self.D[k]
            comps.append(f"{k}:C={C.rows}x{C.cols}{'(zero)' if C.mrd is None else ''},"
                         f"D={D.rows}x{D.cols}{'(zero)' if D.mrd is None else ''}")
        moduli = sorted({f"GF({L.mrd.ext.order})=" + "".join(map(str, L.mrd.ext.modulus)) for L in self._components() if L.mrd is not None})
        return {"construction": "augmented-kk", "d": self.d,
                "layer_sizes": ",".join(map(str, sizes)),
                "components": ";".join(comps), "moduli": ";".join(moduli)}

    def _components(self) -> list[LiftedCode]:
        return [self.layer0, *self.C.values(), *self.D.values()]


def augmented_kk(q: int, n: int, r: int, d: int) -> AugmentedKK:
    return AugmentedKK(q, n, r, d)


def skachek_cardinality(q: int, n: int, r: int, d: int) -> int:
    """L(q, n, r, d), the lower bound attained by the multi-step construction."""
    if not (2 * r <= n and 2 <= d <= r):
        raise ValueError("need r <= n/2 and 2 <= d <= r")
    e = r - d + 1
    l = n % r
    num = q ** (n * e) - q ** ((r + l) * e)
    den = q ** (r * e) - 1
    if num % den:
        raise ArithmeticError(f"L({q},{n},{r},{d}) division inexact")
    return num // den


def ac_upper(q: int, n: int, r: int, d: int) -> int:
    return profile(q, n, r).ac_upper(d)


def extend_length(code: Cdc) -> Cdc:
    """{R(C | 0)}: append a zero column to every generator."""
    F = GF(code.q)
    words = tuple(Subspace._trusted(hstack(U.basis, FqMatrix.zeros(F, U.dim, 1)), U.pivots)
                  for U in code.words)
    meta = dict(code.metadata, extended="length")
    return Cdc(code.q, code.n + 1, code.r, words, None, meta)


def extend_dimension(code: Cdc, seed: int = 0) -> Cdc:
    """{R(D ; d)}: append a random row so each generator reaches rank r + 1."""
    if code.r >= code.n:
        raise ValueError("cannot extend the full space")
    F = GF(code.q)
    rng = np.random.default_rng(seed)
    out = []
    for U in code.words:
        while True:
            v = FqMatrix(F, [rng.integers(0, code.q, size=code.n).tolist()], code.n)
            M = vstack(U.basis, v)
            if rank(M) == code.r + 1:
                out.append(Subspace(M))
                break
    meta = dict(code.metadata, extended="dimension", extend_seed=seed)
    return Cdc(code.q, code.n, code.r + 1, tuple(out), None, meta)


def permuted_lifting_covering(q: int, n: int, r: int, rho: int, book: RankCodebook) -> Cdc:
    """{I(J, C) : J an r-subset of columns, C in book}."""
    if (book.m, book.n) != (r, n - r) or book.q != q:
        raise ValueError(f"book must live in GF({q})^({r} x {n - r})")
    words = []
    for J in itertools.combinations(range(n), r):
        P = PivotSet(J, n)
        for C in book.words:
            words.append(permuted_lift(P, C))
    return Cdc(q, n, r, tuple(words), None,
               {"construction": "permuted-lifting-covering", "rho": rho, "book_size": len(book)})


def full_grassmannian_code(q: int, n: int, r: int) -> Cdc:
    from .grassmann import grassmannian
    return Cdc(q, n, r, tuple(grassmannian(q, n, r)), 1 if 0 < r < n else None,
               {"construction": "grassmannian"})

