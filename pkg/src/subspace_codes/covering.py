"""Covering radius of CDCs and lower/upper bounds on K_C(q, n, r, rho)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from . import _cover
from .constructions import AugmentedKK, Cdc, LiftedCode, permuted_lifting_covering
from .ff import GF
from .grassmann import (DEFAULT_ENUMERATION_CAP, ResourceLimitError, Subspace, gaussian_binomial,
                        grassmannian, injection_distance, pairwise_injection_distances, profile)
from .rank_metric import exact_kr, greedy_rank_covering, kr_upper

EXACT_KC_CAP = 200
VERTEX_ENUM_CAP = 300_000
IP_NODE_BUDGET = 2_000_000

mpmath.mp.prec = 128


def _normalize(n: int, r: int) -> int:
    """K_C is symmetric under r <-> n - r; work with r <= n/2."""
    return min(r, n - r)


def _check_rho(q: int, n: int, r: int, rho: int) -> None:
    if not (0 <= r <= n):
        raise ValueError(f"need 0 <= r <= n, got n={n}, r={r}")
    if not (0 < rho < _normalize(n, r)):
        raise ValueError(f"bounds need 0 < rho < min(r, n-r), got rho={rho}")


# -- covering radii ------------------------------------------------------------

def covering_radius(code: Cdc | Sequence[Subspace], q: int | None = None, n: int | None = None,
                    r: int | None = None, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """max over E_r(q, n) of the injection distance to the code."""
    if isinstance(code, Cdc):
        q, n, r, words = code.q, code.n, code.r, list(code.words)
    else:
        words = list(code)
        q, n, r = words[0].q, words[0].n, words[0].dim
    if not words:
        raise ValueError("empty code has no covering radius")
    points = grassmannian(q, n, r, cap)
    best = np.full(len(points), r + 1, dtype=np.int64)
    step = max(1, 2_000_000 // max(1, len(words)))
    for s in range(0, len(points), step):
        D = pairwise_injection_distances(points[s:s + step], words)
        best[s:s + step] = D.min(axis=1)
    return int(best.max())


def lifting_witness(q: int, n: int, r: int) -> Subspace:
    """R(0 | D_1) with D_1 = (I_r | 0): a subspace meeting every lifting trivially."""
    F = GF(q)
    rows = [[0] * r + [int(i == j) for j in range(n - r)] for i in range(r)]
    return Subspace.span(F, rows, n)


def lifting_radius_check(code: Cdc | LiftedCode) -> Subspace:
    """Return the witness and verify it lies at distance exactly r from every word."""
    if isinstance(code, LiftedCode):
        q, n, r, words = code.q, code.n, code.rows, code.words
    else:
        q, n, r, words = code.q, code.n, code.r, code.words
    if n - r < r:
        raise ValueError("witness needs n - r >= r")
    W = lifting_witness(q, n, r)
    for U in words:
        if U.pivots != tuple(range(r)):
            raise ValueError("code is not a lifting (identity block missing)")
        if injection_distance(W, U) != r:
            raise AssertionError("witness is closer than r to a codeword")
    return W


# -- lower bounds ------------------------------------------------------------

def sphere_covering_lower(q: int, n: int, r: int, rho: int, ac_upper=None) -> tuple[int, int]:
    """(refined, simple): least K with B_C(K, rho) >= [n r], and ceil([n r] / V_C(rho))."""
    _check_rho(q, n, r, rho)
    p = profile(q, n, _normalize(n, r))
    Q, V = p.size, p.ball(rho)
    simple = -(-Q // V)
    K = simple
    while p.union_volume_bound(K, rho, ac_upper) < Q:
        K += 1
    return K, simple


def _coverage_weights(p, rho: int) -> list[list[int]]:
    """W[l][i] = sum_{s <= rho} J_C(l, s, i)."""
    r = p.r
    return [[sum(p.J(l, s, i) for s in range(rho + 1)) for i in range(r + 1)] for l in range(r + 1)]


def _solve_lin(M: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(M)
    A = [row[:] + [bb] for row, bb in zip(M, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * bc for a, bc in zip(A[i], A[c])]
    return [A[i][n] for i in range(n)]


def lp_min_vertex(c: Sequence, G: Sequence[Sequence], h: Sequence) -> tuple[Fraction, list[Fraction]] | None:
    """Exact min of c.x over the bounded polytope {G x >= h} by vertex enumeration."""
    nv = len(c)
    G = [[Fraction(v) for v in row] for row in G]
    h = [Fraction(v) for v in h]
    c = [Fraction(v) for v in c]
    if math.comb(len(G), nv) > VERTEX_ENUM_CAP:
        raise ResourceLimitError("vertex enumeration budget exceeded")
    best = None
    for rows in itertools.combinations(range(len(G)), nv):
        x = _solve_lin([G[i] for i in rows], [h[i] for i in rows])
        if x is None:
            continue
        if all(sum(g * xv for g, xv in zip(G[j], x)) >= h[j] for j in range(len(G))):
            val = sum(ci * xi for ci, xi in zip(c, x))
            if best is None or val < best[0]:
                best = (val, x)
    return best


def _t_delta_lp(p, W, rho: int, delta: int) -> Fraction:
    r = p.r
    G, h = [], []
    for l in range(r + 1):
        G.append(W[l]); h.append(p.sphere(l))
    for i in range(r + 1):
        e = [0] * (r + 1); e[i] = 1
        lo = 1 if i == delta else 0
        hi = 0 if i < delta else p.sphere(i)
        G.append(e); h.append(lo)
        G.append([-v for v in e]); h.append(-hi)
    res = lp_min_vertex([1] * (r + 1), G, h)
    if res is None:
        raise ArithmeticError("T_delta relaxation infeasible")
    return res[0]


def _t_delta_exact(p, W, delta: int, start: int, budget: int) -> int | None:
    """Least integer T admitting a feasible vector, by depth-first search per T."""
    r = p.r
    N = [p.sphere(i) for i in range(r + 1)]
    lo = [1 if i == delta else 0 for i in range(r + 1)]
    hi = [0 if i < delta else N[i] for i in range(r + 1)]
    need = [N[l] for l in range(r + 1)]
    order = [i for i in range(r + 1) if hi[i] > 0]
    # suffix maxima of the weights for pruning
    suf = [[0] * (r + 1) for _ in range(len(order) + 1)]
    for k in range(len(order) - 1, -1, -1):
        i = order[k]
        suf[k] = [max(suf[k + 1][l], W[l][i]) for l in range(r + 1)]
    nodes = 0

    def feasible(k: int, left: int, cov: list[int]) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimitError("T_delta search budget exceeded")
        if all(cov[l] >= need[l] for l in range(r + 1)):
            return sum(lo[i] for i in order[k:]) <= left
        if k == len(order):
            return False
        for l in range(r + 1):
            if cov[l] + suf[k][l] * left < need[l]:
                return False
        i = order[k]
        rest_lo = sum(lo[j] for j in order[k + 1:])
        for a in range(min(hi[i], left - rest_lo), lo[i] - 1, -1):
            nc = [cov[l] + a * W[l][i] for l in range(r + 1)]
            if feasible(k + 1, left - a, nc):
                return True
        return False

    T = max(start, 1)
    while T <= sum(hi):
        if feasible(0, T, [0] * (r + 1)):
            return T
        T += 1
    return None


@dataclass
class ProgramValue:
    value: int
    exact: bool
    note: str = ""


def linear_inequality_lower(q: int, n: int, r: int, rho: int, budget: int = IP_NODE_BUDGET) -> ProgramValue:
    """max over delta <= rho of T_delta; exact integer minimum when the search budget allows."""
    _check_rho(q, n, r, rho)
    p = profile(q, n, _normalize(n, r))
    W = _coverage_weights(p, rho)
    best, exact, notes = 0, True, []
    for delta in range(rho + 1):
        relax = _t_delta_lp(p, W, rho, delta)
        start = math.ceil(relax)
        try:
            T = _t_delta_exact(p, W, delta, start, budget)
            if T is None:
                raise ArithmeticError("T_delta program infeasible")
        except ResourceLimitError:
            T, exact = start, False
            notes.append(f"delta={delta}: relaxation")
        best = max(best, T)
    return ProgramValue(best, exact, "; ".join(notes))


def inner_distribution_lower(q: int, n: int, r: int, rho: int, macwilliams: bool = True) -> ProgramValue:
    """ceil of the rational minimum of sum a_i under coverage and MacWilliams rows."""
    _check_rho(q, n, r, rho)
    p = profile(q, n, _normalize(n, r))
    rr = p.r
    W = _coverage_weights(p, rho)
    # variables a_1..a_r, a_0 = 1
    G, h = [], []
    for l in range(rr + 1):
        G.append([Fraction(W[l][i]) for i in range(1, rr + 1)])
        h.append(Fraction(p.sphere(l) - W[l][0]))
        if macwilliams:
            G.append([Fraction(p.eberlein(i, l), p.sphere(i)) for i in range(1, rr + 1)])
            h.append(Fraction(-p.eberlein(0, l), 1))
    for i in range(1, rr + 1):
        e = [0] * rr; e[i - 1] = 1
        G.append(e); h.append(0)
        G.append([-v for v in e]); h.append(-p.sphere(i))
    try:
        res = lp_min_vertex([1] * rr, G, h)
    except ResourceLimitError:
        return ProgramValue(0, False, "vertex enumeration budget exceeded; trivial bound")
    if res is None:
        raise ArithmeticError("inner-distribution program infeasible")
    return ProgramValue(math.ceil(res[0] + 1), True, f"optimum {res[0] + 1}")


@dataclass
class ExcessValue:
    value: int
    epsilon: int
    delta: int
    fallback: bool


def excess_lower(q: int, n: int, r: int, rho: int) -> ExcessValue:
    _check_rho(q, n, r, rho)
    p = profile(q, n, _normalize(n, r))
    co = p.coefficients
    b, c = co.b[rho], co.c[rho + 1]
    eps = -(-b // c) * c - b
    delta = p.sphere(1) - co.c[rho] + 2 * eps
    Q, V = p.size, p.ball(rho)
    if eps == 0:
        return ExcessValue(-(-Q // V), eps, delta, True)
    denom = V - Fraction(eps, delta) * p.sphere(rho)
    return ExcessValue(math.ceil(Fraction(Q) / denom), eps, delta, False)


# -- upper bounds ------------------------------------------------------------

def expansion_upper(q: int, n: int, r: int, rho: int) -> tuple[int, int]:
    _check_rho(q, n, r, rho)
    r = _normalize(n, r)
    return gaussian_binomial(n - rho, r, q), gaussian_binomial(n, r - rho, q)


def combinatorial_upper(q: int, n: int, r: int, rho: int) -> int:
    """floor(-1 / log_Q(1 - V/Q)) + 1, confirmed as the least K with Q (Q-V)^K < Q^K."""
    _check_rho(q, n, r, rho)
    p = profile(q, n, _normalize(n, r))
    Q, V = p.size, p.ball(rho)
    x = -1 / mpmath.log(1 - mpmath.mpf(V) / Q, Q)
    K = int(mpmath.floor(x)) + 1
    ok = lambda k: Q * (Q - V) ** k < Q ** k
    while K > 1 and ok(K - 1):
        K -= 1
    while not ok(K):
        K += 1
    return K


def jsl_upper(q: int, n: int, r: int, rho: int) -> int:
    _check_rho(q, n, r, rho)
    p = profile(q, n, _normalize(n, r))
    Q, V = p.size, p.ball(rho)
    return int(mpmath.ceil(mpmath.mpf(Q) / V * (1 + mpmath.log(V))))


def greedy_k0(q: int, n: int, r: int, rho: int) -> int:
    r = _normalize(n, r)
    if 2 * rho < r:
        return AugmentedKK(q, n, r, 2 * rho + 1).cardinality_formula()
    return 1


def greedy_domination_upper(q: int, n: int, r: int, rho: int, ac_upper=None) -> tuple[int, list[int]]:
    """(min{k : u_k = 0}, [u_{k0}, u_{k0+1}, ...])."""
    _check_rho(q, n, r, rho)
    p = profile(q, n, _normalize(n, r))
    Q, V = p.size, p.ball(rho)
    k = greedy_k0(q, n, r, rho)
    u = max(0, Q - k * V)
    trace = [u]
    while u > 0:
        denom = min(Q - k, p.union_volume_bound(u, rho, ac_upper))
        u = max(0, u - (-(-u * V // denom)))
        k += 1
        trace.append(u)
    return k, trace


def permuted_lifting_upper(q: int, n: int, r: int, rho: int, kr_value: int | None = None) -> int:
    _check_rho(q, n, r, rho)
    r = _normalize(n, r)
    if kr_value is None:
        kr_value = kr_upper(q, r, n - r, rho)[0]
    return math.comb(n, r) * kr_value


# -- exact and constructive --------------------------------------------------

def _ball_masks(points: list[Subspace], rho: int) -> list[int]:
    D = pairwise_injection_distances(points, points)
    masks = []
    for row in D <= rho:
        x = 0
        for j in np.nonzero(row)[0].tolist():
            x |= 1 << j
        masks.append(x)
    return masks


def exact_kc_small(q: int, n: int, r: int, rho: int, cap: int = EXACT_KC_CAP,
                   node_limit: int = 10 ** 7) -> tuple[int, Cdc]:
    """Exact K_C and a minimum covering code, by iterative deepening set cover."""
    Q = gaussian_binomial(n, r, q)
    points = grassmannian(q, n, r)
    if rho >= min(r, n - r):
        return 1, Cdc(q, n, r, (points[0],))
    if rho <= 0:
        return Q, Cdc(q, n, r, tuple(points))
    if Q > cap:
        raise ResourceLimitError(f"[n r] = {Q} exceeds exact search cap {cap}")
    masks = _ball_masks(points, rho)
    refined, _ = sphere_covering_lower(q, n, r, rho)
    chosen = _cover.exact_min_cover(masks, (1 << Q) - 1, lower=refined, fixed=0, node_limit=node_limit)
    return len(chosen), Cdc(q, n, r, tuple(points[i] for i in chosen), None,
                            {"construction": "exact-covering", "rho": rho})


def greedy_covering_construct(q: int, n: int, r: int, rho: int,
                              cap: int = 1 << 14) -> Cdc:
    """Max-coverage greedy covering code seeded like the domination bound."""
    Q = gaussian_binomial(n, r, q)
    if Q > cap:
        raise ResourceLimitError(f"[n r] = {Q} exceeds greedy cap {cap}")
    points = grassmannian(q, n, r)
    if rho >= min(r, n - r):
        return Cdc(q, n, r, (points[0],), None, {"construction": "greedy-covering", "rho": rho})
    index = {U: i for i, U in enumerate(points)}
    rn = _normalize(n, r)
    if 2 * rho < rn and r == rn:
        seed = [index[U] for U in AugmentedKK(q, n, r, 2 * rho + 1).words()]
    else:
        seed = [0]
    masks = _ball_masks(points, rho)
    chosen = _cover.greedy_cover(masks, (1 << Q) - 1, initial=seed)
    return Cdc(q, n, r, tuple(points[i] for i in chosen), None,
               {"construction": "greedy-covering", "rho": rho, "seed_size": len(seed)})


def permuted_lifting_witness(q: int, n: int, r: int, rho: int) -> Cdc:
    """Permuted-lifting covering code over the smallest available rank covering book."""
    rn = _normalize(n, r)
    _, method = kr_upper(q, rn, n - rn, rho)
    if method == "exact":
        book = exact_kr(q, rn, n - rn, rho, node_limit=10 ** 6)
    elif method in ("greedy", "trivial"):
        book = greedy_rank_covering(q, rn, n - rn, rho)
    else:
        raise ResourceLimitError("rank covering book too large to materialise")
    return permuted_lifting_covering(q, n, rn, rho, book)


def extend_length_witness(q: int, n: int, r: int, rho: int) -> Cdc:
    """Iterate extend_length rho times from E_r(q, n - rho) (radius 0)."""
    from .constructions import extend_length, full_grassmannian_code
    code = full_grassmannian_code(q, n - rho, r)
    for _ in range(rho):
        code = extend_length(code)
    return code


def extend_dimension_witness(q: int, n: int, r: int, rho: int, seed: int = 0) -> Cdc:
    """Iterate extend_dimension rho times from E_{r-rho}(q, n) (radius 0)."""
    from .constructions import extend_dimension, full_grassmannian_code
    code = full_grassmannian_code(q, n, r - rho)
    for i in range(rho):
        code = extend_dimension(code, seed + i)
    return code


def asymptotic_rate(r_frac: float, rho_frac: float) -> float:
    if not (0 <= rho_frac <= r_frac <= 0.5):
        raise ValueError("need 0 <= rho' <= r' <= 1/2")
    if r_frac == 0:
        return 0.0
    return 1 - rho_frac * (1 - rho_frac) / (r_frac * (1 - r_frac))


def convergence_table(q: int, r_frac: float, rho_frac: float, ns: Sequence[int] = (8, 12, 16)
                      ) -> list[dict]:
    """log_q(bound) / log_q [n r] for the simple sphere-covering and JSL bounds."""
    rows = []
    for n in ns:
        r, rho = round(r_frac * n), round(rho_frac * n)
        if not 0 < rho < r <= n // 2:
            continue
        Q = gaussian_binomial(n, r, q)
        lo = sphere_covering_lower(q, n, r, rho)[1]
        hi = jsl_upper(q, n, r, rho)
        lq = math.log(Q)
        rows.append({"n": n, "r": r, "rho": rho, "lower_rate": math.log(lo) / lq,
                     "upper_rate": math.log(hi) / lq, "limit": asymptotic_rate(r_frac, rho_frac)})
    return rows


# -- report ------------------------------------------------------------------

@dataclass
class BoundEntry:
    name: str
    side: str
    value: int
    note: str = ""


@dataclass
class BoundsReport:
    q: int
    n: int
    r: int
    rho: int
    entries: list[BoundEntry] = field(default_factory=list)
    exact: int | None = None

    def add(self, name, side, value, note=""):
        self.entries.append(BoundEntry(name, side, int(value), note))

    @property
    def best_lower(self) -> int:
        return max(e.value for e in self.entries if e.side == "lower")

    @property
    def best_upper(self) -> int:
        return min(e.value for e in self.entries if e.side == "upper")

    def sandwich_holds(self) -> bool:
        if self.exact is None:
            return self.best_lower <= self.best_upper
        return all((e.value <= self.exact) if e.side == "lower" else (e.value >= self.exact)
                   for e in self.entries if e.side in ("lower", "upper"))

    def records(self) -> list[dict]:
        out = [{"q": self.q, "n": self.n, "r": self.r, "rho": self.rho, "name": e.name,
                "side": e.side, "value": e.value, "note": e.note} for e in self.entries]
        if self.exact is not None:
            out.append({"q": self.q, "n": self.n, "r": self.r, "rho": self.rho, "name": "exact_K_C",
                        "side": "exact", "value": self.exact, "note": "exhaustive minimum covering"})
        return out


def bounds_report(q: int, n: int, r: int, rho: int, exact: bool = False,
                  witnesses: bool = False) -> BoundsReport:
    """Every implemented bound on K_C(q, n, r, rho), optionally with the exact value."""
    _check_rho(q, n, r, rho)
    rep = BoundsReport(q, n, r, rho)
    refined, simple = sphere_covering_lower(q, n, r, rho)
    rep.add("sphere_covering_simple", "lower", simple, "ceil([n r]/V_C)")
    rep.add("sphere_covering_refined", "lower", refined, "least K with B_C(K) >= [n r]")
    try:
        t = linear_inequality_lower(q, n, r, rho)
        rep.add("linear_inequality_T", "lower", t.value, "exact integer program" if t.exact else t.note)
    except ResourceLimitError as exc:
        rep.add("linear_inequality_T", "lower", 0, f"not computed: {exc}")
    inner = inner_distribution_lower(q, n, r, rho)
    rep.add("inner_distribution", "lower", inner.value, inner.note)
    ex = excess_lower(q, n, r, rho)
    rep.add("excess", "lower", ex.value,
            f"epsilon={ex.epsilon} delta={ex.delta}" + (" (epsilon=0: simple bound)" if ex.fallback else ""))
    a, b = expansion_upper(q, n, r, rho)
    rep.add("expansion_length", "upper", a, "[n-rho r]")
    rep.add("expansion_dimension", "upper", b, "[n r-rho]")
    rep.add("combinatorial", "upper", combinatorial_upper(q, n, r, rho), "random-code averaging")
    rep.add("jsl", "upper", jsl_upper(q, n, r, rho), "(Q/V)(1 + ln V)")
    g, trace = greedy_domination_upper(q, n, r, rho)
    rep.add("greedy_domination", "upper", g, f"k0={greedy_k0(q, n, r, rho)} steps={len(trace) - 1}")
    rn = _normalize(n, r)
    kr, method = kr_upper(q, rn, n - rn, rho)
    rep.add("permuted_lifting", "upper", math.comb(n, rn) * kr, f"C(n,r) * K_R<={kr} ({method})")
    if exact:
        try:
            rep.exact = exact_kc_small(q, n, r, rho)[0]
        except (ResourceLimitError, _cover.SearchLimitError):
            rep.exact = None
    if witnesses:
        for name, build in (("witness_greedy_covering", greedy_covering_construct),
                            ("witness_permuted_lifting", permuted_lifting_witness),
                            ("witness_extend_length", extend_length_witness)):
            try:
                code = build(q, n, r, rho)
            except ResourceLimitError:
                continue
            rep.add(name, "witness", len(code), f"radius={covering_radius(code)}")
    return rep
