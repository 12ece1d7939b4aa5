"""Operator-channel perturbations and seeded decoding experiments."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constructions import AugmentedKK, Cdc, LiftedCode
from .decoders import decode_augmented, kk_bounded_decode, nearest_codeword_oracle
from .ff import FqMatrix, rank, vstack
from .grassmann import Subspace, subspace_distance

ORACLE_CAP = 100_000


@dataclass(frozen=True)
class ChannelSpec:
    erasures: int
    insertions: int
    seed: int = 0


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator per trial, derived from the experiment seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def _random_matrix(F, rows: int, cols: int, rng: np.random.Generator) -> FqMatrix:
    if rows == 0:
        return FqMatrix.zeros(F, 0, cols)
    return FqMatrix(F, rng.integers(0, F.order, size=(rows, cols)).tolist(), cols)


def perturb(U: Subspace, spec: ChannelSpec | tuple[int, int], rng: np.random.Generator | None = None
            ) -> FqMatrix:
    """Delete ``erasures`` dimensions of U and adjoin ``insertions`` new ones.

    The kept part is a uniformly random subspace of U of dimension
    dim U - erasures (given by a random full-rank combination of the basis);
    each inserted vector lies outside the span accumulated so far.
    """
    if isinstance(spec, tuple):
        spec = ChannelSpec(*spec)
    if rng is None:
        rng = trial_rng(spec.seed, 0)
    F, n, r = U.field, U.n, U.dim
    e, i = spec.erasures, spec.insertions
    if not 0 <= e <= r:
        raise ValueError(f"cannot erase {e} dimensions of a dimension-{r} space")
    if r - e + i > n:
        raise ValueError(f"cannot reach dimension {r - e + i} in GF(q)^{n}")
    keep = r - e
    while True:
        T = _random_matrix(F, keep, r, rng)
        if rank(T) == keep:
            break
    A = T @ U.basis if keep else FqMatrix.zeros(F, 0, n)
    cur = keep
    for _ in range(i):
        while True:
            v = _random_matrix(F, 1, n, rng)
            B = vstack(A, v)
            if rank(B) == cur + 1:
                A, cur = B, cur + 1
                break
    return A


@dataclass
class ExperimentReport:
    q: int
    n: int
    r: int
    d: int | None
    erasures: int
    insertions: int
    seed: int
    trials: int
    success: int = 0
    failure: int = 0
    miscorrection: int = 0
    recovered_sent: int = 0
    max_success_distance: int | None = None
    oracle_checked: int = 0
    distance_counts: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "q": self.q, "n": self.n, "r": self.r, "d": self.d,
            "erasures": self.erasures, "insertions": self.insertions,
            "seed": self.seed, "rng": "PCG64/SeedSequence(seed, spawn_key=(trial,))",
            "trials": self.trials, "success": self.success, "failure": self.failure,
            "miscorrection": self.miscorrection, "recovered_sent": self.recovered_sent,
            "max_success_distance": self.max_success_distance,
            "oracle_checked": self.oracle_checked,
        }


def run_experiment(code: Cdc | AugmentedKK, spec: ChannelSpec, trials: int,
                   oracle_cap: int = ORACLE_CAP) -> ExperimentReport:
    """Send uniform codewords through the channel, decode, and classify each trial.

    success: the decoder returned the unique nearest codeword (checked by
    the exhaustive oracle unless the output is the sent word within d-1).
    failure: the decoder gave up.  miscorrection: any other output.
    """
    if isinstance(code, AugmentedKK):
        E, words = code, None
        q, n, r, d, size = E.q, E.n, E.r, E.d, E.size
        pick = E.word_by_index
        decode = lambda A: decode_augmented(E, A).word
    else:
        q, n, r, d, size = code.q, code.n, code.r, code.declared_d, len(code)
        words = list(code.words)
        pick = words.__getitem__
        if code.metadata.get("construction") == "kk":
            layer = LiftedCode.build(q, r, n - r, d)
            decode = lambda A: (lambda res: None if res is None else res[0])(kk_bounded_decode(layer, A))
        else:
            decode = lambda A: _unique_nearest(words, A)
    rep = ExperimentReport(q, n, r, d, spec.erasures, spec.insertions, spec.seed, trials)
    oracle_words = None
    for t in range(trials):
        rng = trial_rng(spec.seed, t)
        sent = pick(int(rng.integers(0, size)))
        A = perturb(sent, spec, rng)
        out = decode(A)
        if out is None:
            rep.failure += 1
            continue
        dist = subspace_distance(_space(A), out)
        if out == sent and d is not None and dist <= d - 1:
            ok = True
        elif size <= oracle_cap:
            if oracle_words is None:
                oracle_words = words if words is not None else E.words()
            near, nd, unique = nearest_codeword_oracle(oracle_words, A)
            rep.oracle_checked += 1
            ok = unique and near == out
        else:
            ok = out == sent
        if ok:
            rep.success += 1
            rep.recovered_sent += out == sent
            rep.max_success_distance = dist if rep.max_success_distance is None else max(
                rep.max_success_distance, dist)
            rep.distance_counts[dist] = rep.distance_counts.get(dist, 0) + 1
        else:
            rep.miscorrection += 1
    return rep


def _space(A: FqMatrix) -> Subspace:
    from .decoders import ReceivedSpace
    return ReceivedSpace(A).space


def _unique_nearest(words, A):
    near, _, unique = nearest_codeword_oracle(words, A)
    return near if unique else None
