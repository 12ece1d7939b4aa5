"""Vectorised GF(2) rank over batches of small packed matrices.

Rows are packed as ``uint64`` (so at most 64 columns); a batch is an array
of shape ``(B, k)`` holding B matrices of k rows each.
"""

from __future__ import annotations

import numpy as np

CHUNK = 1 << 18


def batch_rank(M: np.ndarray, ncols: int) -> np.ndarray:
    """Rank of each ``k``-row packed matrix in ``M`` (shape ``(B, k)``)."""
    if ncols > 64:
        raise ValueError("packed batch rank supports at most 64 columns")
    M = np.array(M, dtype=np.uint64, copy=True)
    B, k = M.shape
    rank = np.zeros(B, dtype=np.int64)
    if B == 0 or k == 0:
        return rank
    used = np.zeros((B, k), dtype=bool)
    ar = np.arange(B)
    one = np.uint64(1)
    for b in range(ncols - 1, -1, -1):
        bit = ((M >> np.uint64(b)) & one).astype(bool)
        cand = bit & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        p = cand.argmax(axis=1)
        prow = M[ar, p]
        elim = bit & has[:, None]
        elim[ar, p] = False
        M ^= np.where(elim, prow[:, None], np.uint64(0))
        used[ar[has], p[has]] = True
        rank += has
    return rank


def stacked_ranks(left: np.ndarray, right: np.ndarray, ncols: int) -> np.ndarray:
    """Ranks of ``vstack(left[i], right)`` for every i; ``right`` is one matrix."""
    out = np.empty(len(left), dtype=np.int64)
    right = np.asarray(right, dtype=np.uint64).reshape(1, -1)
    for s in range(0, len(left), CHUNK):
        blk = left[s:s + CHUNK]
        both = np.concatenate([blk, np.repeat(right, len(blk), axis=0)], axis=1)
        out[s:s + CHUNK] = batch_rank(both, ncols)
    return out


def pair_ranks(X: np.ndarray, Y: np.ndarray, ncols: int) -> np.ndarray:
    """Matrix ``R[i, j] = rank(vstack(X[i], Y[j]))``."""
    R = np.empty((len(X), len(Y)), dtype=np.int64)
    if len(X) == 0 or len(Y) == 0:
        return R
    step = max(1, CHUNK // max(1, len(Y)))
    for s in range(0, len(X), step):
        xs = X[s:s + step]
        both = np.concatenate([np.repeat(xs, len(Y), axis=0), np.tile(Y, (len(xs), 1))], axis=1)
        R[s:s + step] = batch_rank(both, ncols).reshape(len(xs), len(Y))
    return R


BITSET_MAX_COLS = 10

if hasattr(np, "bitwise_count"):
    def _popcount(a: np.ndarray) -> np.ndarray:
        return np.bitwise_count(a)
else:  # pragma: no cover
    _BYTE_POP = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)

    def _popcount(a: np.ndarray) -> np.ndarray:
        b = a.view(np.uint8).reshape(a.shape + (8,))
        return _BYTE_POP[b].sum(axis=-1)


def span_bitsets(M: np.ndarray, ncols: int) -> np.ndarray:
    """Membership bitset over GF(2)^ncols of each row space in ``M`` (shape ``(B, k)``)."""
    B, k = M.shape
    words = max(1, (1 << ncols) // 64)
    vals = np.zeros((B, 1), dtype=np.uint64)
    for i in range(k):
        vals = np.concatenate([vals, vals ^ M[:, i:i + 1]], axis=1)
    out = np.zeros((B, words), dtype=np.uint64)
    rows = np.repeat(np.arange(B), vals.shape[1])
    flat = vals.ravel()
    np.bitwise_or.at(out, (rows, (flat >> np.uint64(6)).astype(np.int64)),
                     np.uint64(1) << (flat & np.uint64(63)))
    return out


def pair_intersection_dims(SX: np.ndarray, SY: np.ndarray) -> np.ndarray:
    """``dim(X[i] & Y[j])`` from membership bitsets."""
    R = np.empty((len(SX), len(SY)), dtype=np.int64)
    if len(SX) == 0 or len(SY) == 0:
        return R
    step = max(1, CHUNK // max(1, len(SY) * SX.shape[1] // 4))
    for s in range(0, len(SX), step):
        xs = SX[s:s + step]
        cnt = _popcount(xs[:, None, :] & SY[None, :, :]).sum(axis=2, dtype=np.int64)
        R[s:s + step] = np.log2(cnt).astype(np.int64)
    return R
