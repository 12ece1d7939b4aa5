"""Decoders for KK codes and augmented KK codes, plus an exhaustive oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _gf2batch
from .constructions import AugmentedKK, Cdc, LiftedCode, lift
from .ff import FqMatrix, rank, rref
from .grassmann import ResourceLimitError, Subspace, distances_to, packed_array, subspace_distance

EXHAUSTIVE_CAP = 1 << 20

INF = float("inf")


class ReceivedSpace:
    """A received matrix with its rank and canonical row space cached."""

    def __init__(self, A: FqMatrix):
        self.A = A
        basis, self.rank, _ = rref(A)
        self.space = Subspace(basis) if self.rank else Subspace.zero(A.field, A.ncols)

    @property
    def n(self) -> int:
        return self.A.ncols


def _as_space(A: FqMatrix | Subspace) -> Subspace:
    return A if isinstance(A, Subspace) else ReceivedSpace(A).space


def _layer_distances(layer: LiftedCode, U: Subspace) -> np.ndarray:
    """Subspace distances from U to every word of a lifted code."""
    if layer.size > EXHAUSTIVE_CAP:
        raise ResourceLimitError(f"exhaustive layer search over {layer.size} words exceeds cap")
    words = layer.words
    if U.q == 2 and U.n <= _gf2batch.BITSET_MAX_COLS:
        bits = layer.__dict__.get("_bitsets")
        if bits is None:
            bits = _gf2batch.span_bitsets(layer.packed, U.n)
            layer.__dict__["_bitsets"] = bits
        ub = _gf2batch.span_bitsets(packed_array([U]), U.n)
        inter = _gf2batch.pair_intersection_dims(ub, bits)[0]
        join = U.dim + layer.rows - inter
        return 2 * join - U.dim - layer.rows
    if U.q == 2 and U.n <= 64:
        joins = _gf2batch.stacked_ranks(layer.packed, np.array(U.packed, dtype=np.uint64), U.n)
        return 2 * joins - U.dim - layer.rows
    return np.array([subspace_distance(U, V) for V in words], dtype=np.int64)


def kk_bounded_decode(layer: LiftedCode, A: FqMatrix | Subspace) -> tuple[Subspace, FqMatrix] | None:
    """Codeword of the lifted code within subspace distance d-1 of R(A), else None.

    When R(A) has the form R(I | Y) the problem is handed to the rank-metric
    decoder (d_S = 2 d_R there); otherwise the layer is scanned exhaustively.
    """
    U = _as_space(A)
    if U.n != layer.n:
        raise ValueError(f"reception has {U.n} columns, code lives in GF(q)^{layer.n}")
    rr = layer.rows
    if layer.mrd is not None and U.dim == rr and U.pivots == tuple(range(rr)):
        Y = U.basis.col_slice(rr, layer.n)
        C = layer.mrd.decode(Y)
        if C is None:
            return None
        return lift(C), C
    dists = _layer_distances(layer, U)
    i = int(np.argmin(dists))
    if dists[i] > layer.d - 1:
        return None
    return layer.words[i], layer.matrix(i)


@dataclass
class EbddResult:
    k: int
    word: Subspace
    d_k: int
    f_k: int
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def ebdd(k: int, A: FqMatrix, code: AugmentedKK) -> EbddResult:
    """Enhanced bounded distance decoding of R(A) against layer k."""
    n, r, d = code.n, code.r, code.d
    if A.ncols != n:
        raise ValueError(f"reception has {A.ncols} columns, expected {n}")
    if not 0 <= k <= r // d:
        raise ValueError(f"layer {k} out of range")
    U = _as_space(A)
    if k == 0:
        res = kk_bounded_decode(code.layer0, U)
        if res is None:
            return EbddResult(0, code.zero_word(0), d, 0, "kk-failure")
        return EbddResult(0, res[0], subspace_distance(U, res[0]), 0)
    kd = k * d
    top = r - kd
    A12 = A.columns(range(r))
    A13 = A.columns(list(range(top)) + list(range(r, n)))
    F = code.field
    U12, U13 = _as_space(A12), _as_space(A13)
    resC = kk_bounded_decode(code.C[k], U12)
    if resC is None:
        return EbddResult(k, code.zero_word(k), d, 0, "c-failure")
    resD = kk_bounded_decode(code.D[k], U13)
    if resD is None:
        word = code.assemble(k, resC[1], FqMatrix.zeros(F, r, n - r - kd))
        return EbddResult(k, word, d, 0, "d-failure")
    word = code.assemble(k, resC[1], resD[1])
    f_k = 2 * d - max(subspace_distance(U12, resC[0]), subspace_distance(U13, resD[0]))
    return EbddResult(k, word, subspace_distance(U, word), f_k)


@dataclass
class DecodeResult:
    word: Subspace | None
    distance: int | None
    branch: str
    layer: int | None = None
    calls: list[EbddResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.word is not None


def decode_augmented(code: AugmentedKK, A: FqMatrix, metric: str = "subspace",
                     strict: bool = True) -> DecodeResult:
    """Decode R(A) in an augmented KK code; returns a DecodeResult (word None on failure).

    The decision does not depend on ``metric``; it selects how the reported
    distance is measured.
    """
    if metric not in ("subspace", "injection"):
        raise ValueError(f"unknown metric {metric!r}")
    n, r, d = code.n, code.r, code.d
    rec = ReceivedSpace(A)
    calls: list[EbddResult] = []

    def done(res: EbddResult, branch: str) -> DecodeResult:
        w = res.word
        dist = subspace_distance(rec.space, w)
        if metric == "injection":
            dist = (dist + abs(rec.rank - r)) // 2
        return DecodeResult(w, dist, branch, res.k, calls)

    def fail(branch: str) -> DecodeResult:
        return DecodeResult(None, None, branch, None, calls)

    if rec.rank < r - d + 1:
        return fail("failure: rank below r-d+1")
    rk0 = rank(A.columns(range(r)))
    l, m = divmod(r - rk0, d)
    lo = ebdd(l, A, code)
    calls.append(lo)
    if lo.d_k <= d - 1:
        return done(lo, f"layer {l}: within d-1")
    if m == 0:
        return fail("failure: m = 0")
    if l + 1 <= r // d:
        hi = ebdd(l + 1, A, code)
        calls.append(hi)
        if hi.d_k <= d - 1:
            return done(hi, f"layer {l + 1}: within d-1")
        d_hi, f_hi = hi.d_k, hi.f_k
    else:
        hi, d_hi, f_hi = None, INF, INF
    less = (lambda a, b: a < b) if strict else (lambda a, b: a <= b)
    if less(lo.d_k, min(d + m, lo.f_k, d_hi, f_hi, 2 * d - m)):
        return done(lo, f"layer {l}: comparison")
    if hi is not None and less(d_hi, min(d + m, lo.d_k, lo.f_k, f_hi, 2 * d - m)):
        return done(hi, f"layer {l + 1}: comparison")
    return fail("failure: no comparison satisfied")


def nearest_codeword_oracle(words: Sequence[Subspace] | Cdc, A: FqMatrix | Subspace,
                            metric: str = "subspace") -> tuple[Subspace, int, bool]:
    """(nearest word, distance, unique?) by exhaustive sweep."""
    words = list(words)
    U = _as_space(A)
    dists = distances_to(U, words, metric)
    i = int(np.argmin(dists))
    best = int(dists[i])
    unique = int((dists == best).sum()) == 1
    return words[i], best, unique
