"""Finite fields, dense matrices over them, and linearized polynomials.

A field element is a plain ``int``.  For a prime field GF(p) it is the
residue itself.  For an extension ``F = base[x]/(modulus)`` of degree m the
integer ``sum(c_i * |base|**i)`` encodes the polynomial ``sum(c_i x^i)``,
so the digits of an element in base ``|base|`` are its coordinates in the
polynomial basis ``1, x, ..., x^(m-1)``.  GF(p^e) is the extension of GF(p)
of degree e; GF(q^m) used by rank-metric codes is the extension of GF(q) of
degree m.  Multiplication goes through exp/log tables built once per field.

Matrices are immutable row tuples.  Over GF(2) rank and row reduction pack
each row into an ``int`` (leftmost column = most significant bit) and run
XOR elimination.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_FIELD_ORDER = 1 << 16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"field order must be >= 2, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over a field, coefficient lists low -> high ---------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(F: "FiniteField", a: Sequence[int], b: Sequence[int]) -> list[int]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = F.inv(b[-1])
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        coef = F.mul(a[-1], inv_lead)
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(coef, bi))
        _poly_trim(a)
    return a


def _monic_polys(F: "FiniteField", degree: int) -> Iterator[list[int]]:
    for code in range(F.order ** degree):
        coeffs = []
        for _ in range(degree):
            code, c = divmod(code, F.order)
            coeffs.append(c)
        yield coeffs + [1]


def is_irreducible(F: "FiniteField", poly: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _poly_trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for x in range(F.order):  # roots
        acc = 0
        for c in reversed(poly):
            acc = F.add(F.mul(acc, x), c)
        if acc == 0:
            return False
    for k in range(2, deg // 2 + 1):
        for g in _monic_polys(F, k):
            if not _poly_mod(F, poly, g):
                return False
    return True


@functools.lru_cache(maxsize=None)
def default_modulus(base: "FiniteField", m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible polynomial of degree m.

    Candidates ``x^m + c_{m-1}x^{m-1} + ... + c_0`` are ordered by the
    integer ``sum(c_i |base|^i)``, i.e. the top coefficient is compared first.
    """
    for poly in _monic_polys(base, m):
        if is_irreducible(base, poly):
            return tuple(poly)
    raise ValueError(f"no irreducible polynomial of degree {m}")  # unreachable


class FiniteField:
    """GF(p) when ``base`` is None, otherwise ``base[x]/(modulus)``."""

    def __init__(self, p: int | None = None, *, base: "FiniteField | None" = None,
                 degree: int = 1, modulus: Sequence[int] | None = None):
        if base is None:
            if p is None or not _is_prime(p):
                raise ValueError(f"prime field needs a prime, got {p}")
            self.base = None
            self.char = p
            self.degree = 1
            self.modulus: tuple[int, ...] | None = None
            self.order = p
        else:
            if degree < 1:
                raise ValueError("extension degree must be >= 1")
            self.base = base
            self.char = base.char
            self.degree = degree
            self.order = base.order ** degree
            if self.order > MAX_FIELD_ORDER:
                raise ValueError(f"field order {self.order} exceeds {MAX_FIELD_ORDER}")
            mod = tuple(modulus) if modulus is not None else default_modulus(base, degree)
            if len(mod) != degree + 1 or mod[-1] != 1:
                raise ValueError("modulus must be monic of the extension degree")
            if any(not 0 <= c < base.order for c in mod):
                raise ValueError("modulus coefficients must lie in the base field")
            if not is_irreducible(base, mod):
                raise ValueError(f"modulus {mod} is reducible")
            self.modulus = mod
        self._build_tables()

    # identity ---------------------------------------------------------
    @property
    def q(self) -> int:
        return self.order

    def __repr__(self) -> str:
        if self.base is None:
            return f"GF({self.order})"
        return f"GF({self.order}) over GF({self.base.order}) mod {list(self.modulus)}"

    def __eq__(self, other):
        if not isinstance(other, FiniteField):
            return NotImplemented
        return (self.order == other.order and self.base == other.base
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.order, self.modulus, self.base))

    def __reduce__(self):
        if self.base is None:
            return (prime_field, (self.char,))
        return (extension_field, (self.base, self.degree, self.modulus))

    # tables -------------------------------------------------------------
    def _raw_mul(self, a: int, b: int) -> int:
        B = self.base
        da, db = self.to_vector(a), self.to_vector(b)
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        return self.from_vector(_poly_mod(B, prod, self.modulus) + [0] * self.degree)

    def _raw_pow(self, a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self._raw_mul(result, a)
            a = self._raw_mul(a, a)
            k >>= 1
        return result

    def _build_tables(self) -> None:
        N = self.order
        if self.base is None:
            mul = lambda a, b: a * b % N
            pw = lambda a, k: pow(a, k, N)
        else:
            if N <= 256 and self.char != 2:
                B = self.base
                self._add_table = [[self._digit_add(a, b) for b in range(N)] for a in range(N)]
            mul, pw = self._raw_mul, self._raw_pow
        factors = _prime_factors(N - 1)
        gen = next(g for g in range(1, N)
                   if all(pw(g, (N - 1) // f) != 1 for f in factors)) if N > 2 else 1
        exp = [0] * (2 * (N - 1))
        log = [0] * N
        x = 1
        for i in range(N - 1):
            exp[i] = x
            log[x] = i
            x = mul(x, gen)
        for i in range(N - 1, 2 * (N - 1)):
            exp[i] = exp[i - (N - 1)]
        self.generator = gen
        self._exp, self._log = exp, log

    def _digit_add(self, a: int, b: int, sign: int = 1) -> int:
        B, Q = self.base, self.base.order
        out, place = 0, 1
        while a or b:
            a, x = divmod(a, Q)
            b, y = divmod(b, Q)
            out += (B.add(x, y) if sign > 0 else B.sub(x, y)) * place
            place *= Q
        return out

    # arithmetic -----------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.char == 2:
            return a ^ b
        if self.base is None:
            s = a + b
            return s - self.order if s >= self.order else s
        t = getattr(self, "_add_table", None)
        return t[a][b] if t is not None else self._digit_add(a, b)

    def neg(self, a: int) -> int:
        if self.char == 2 or a == 0:
            return a
        if self.base is None:
            return self.order - a
        return self._digit_add(0, a, sign=-1)

    def sub(self, a: int, b: int) -> int:
        if self.char == 2:
            return a ^ b
        if self.base is None:
            s = a - b
            return s + self.order if s < 0 else s
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self!r}")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("0 raised to a negative power")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.order - 1)]

    def frobenius(self, a: int, k: int = 1) -> int:
        """``a ** (|base| ** k)``: the GF(base)-linear Frobenius, k may be negative."""
        if self.base is None:
            return a
        k %= self.degree
        return self.pow(a, self.base.order ** k)

    def elements(self) -> range:
        return range(self.order)

    # coordinates over the base field -------------------------------------
    def to_vector(self, a: int) -> list[int]:
        Q = self.base.order
        out = []
        for _ in range(self.degree):
            a, c = divmod(a, Q)
            out.append(c)
        return out

    def from_vector(self, v: Iterable[int]) -> int:
        Q = self.base.order
        out, place = 0, 1
        for i, c in enumerate(v):
            if i >= self.degree:
                if c:
                    raise ValueError("vector longer than the extension degree")
                continue
            out += c * place
            place *= Q
        return out


@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> FiniteField:
    return FiniteField(p)


@functools.lru_cache(maxsize=None)
def extension_field(base: FiniteField, m: int, modulus: tuple[int, ...] | None = None) -> FiniteField:
    return FiniteField(base=base, degree=m, modulus=modulus)


@functools.lru_cache(maxsize=None)
def GF(q: int) -> FiniteField:
    """The field of order q with the default (smallest irreducible) modulus."""
    p, e = factor_prime_power(q)
    if e == 1:
        return prime_field(p)
    return extension_field(prime_field(p), e)


# -- GF(2) packed rows ----------------------------------------------------

def pack_row(row: Sequence[int]) -> int:
    x = 0
    for v in row:
        x = (x << 1) | v
    return x


def unpack_row(x: int, ncols: int) -> tuple[int, ...]:
    return tuple((x >> (ncols - 1 - j)) & 1 for j in range(ncols))


def gf2_rank(rows: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    for x in rows:
        while x:
            b = x.bit_length() - 1
            p = basis.get(b)
            if p is None:
                basis[b] = x
                break
            x ^= p
    return len(basis)


def gf2_rref(rows: Iterable[int]) -> list[int]:
    """Reduced echelon basis of packed rows, highest pivot first."""
    piv: dict[int, int] = {}
    for x in rows:
        for b, p in piv.items():
            if (x >> b) & 1:
                x ^= p
        if x:
            b = x.bit_length() - 1
            for bb in piv:
                if (piv[bb] >> b) & 1:
                    piv[bb] ^= x
            piv[b] = x
    return [piv[b] for b in sorted(piv, reverse=True)]


# -- matrices ---------------------------------------------------------------

class FqMatrix:
    """Immutable dense matrix over a FiniteField."""

    __slots__ = ("field", "rows", "nrows", "ncols", "_hash")

    def __init__(self, field: FiniteField, rows: Iterable[Sequence[int]], ncols: int | None = None):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for v in r:
                if not 0 <= v < field.order:
                    raise ValueError(f"entry {v} is not an element of {field!r}")
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _trusted(cls, field, rows, ncols):
        M = cls.__new__(cls)
        M.field, M.rows, M.nrows, M.ncols, M._hash = field, rows, len(rows), ncols, None
        return M

    @classmethod
    def zeros(cls, field: FiniteField, nrows: int, ncols: int) -> "FqMatrix":
        return cls._trusted(field, tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: FiniteField, n: int) -> "FqMatrix":
        return cls._trusted(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return (self.ncols == other.ncols and self.rows == other.rows
                and self.field.order == other.field.order)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.order, self.ncols, self.rows))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(map(str, r)) for r in self.rows)
        return f"FqMatrix(GF({self.field.order}), {self.nrows}x{self.ncols}, [{body}])"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @property
    def T(self) -> "FqMatrix":
        return FqMatrix._trusted(self.field, tuple(zip(*self.rows)) if self.nrows else
                                 tuple(() for _ in range(self.ncols)), self.nrows)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def _check_same(self, other: "FqMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        self._check_same(other)
        F = self.field
        return FqMatrix._trusted(F, tuple(tuple(F.add(a, b) for a, b in zip(r, s))
                                          for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        self._check_same(other)
        F = self.field
        return FqMatrix._trusted(F, tuple(tuple(F.sub(a, b) for a, b in zip(r, s))
                                          for r, s in zip(self.rows, other.rows)), self.ncols)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions differ")
        F = self.field
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if a and b:
                        acc = F.add(acc, F.mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return FqMatrix._trusted(F, tuple(out), other.ncols)

    def scale(self, c: int) -> "FqMatrix":
        F = self.field
        return FqMatrix._trusted(F, tuple(tuple(F.mul(c, a) for a in r) for r in self.rows), self.ncols)

    def columns(self, idx: Sequence[int] | range) -> "FqMatrix":
        idx = list(idx)
        return FqMatrix._trusted(self.field, tuple(tuple(r[j] for j in idx) for r in self.rows), len(idx))

    def col_slice(self, start: int, stop: int) -> "FqMatrix":
        return FqMatrix._trusted(self.field, tuple(r[start:stop] for r in self.rows), stop - start)

    def row_slice(self, start: int, stop: int) -> "FqMatrix":
        return FqMatrix._trusted(self.field, self.rows[start:stop], self.ncols)

    def packed(self) -> list[int]:
        if self.field.order != 2:
            raise ValueError("packed rows exist only over GF(2)")
        return [pack_row(r) for r in self.rows]

    def rref(self) -> tuple["FqMatrix", int, tuple[int, ...]]:
        return rref(self)

    def rank(self) -> int:
        return rank(self)


def hstack(*ms: FqMatrix) -> FqMatrix:
    F, n = ms[0].field, ms[0].nrows
    if any(M.nrows != n for M in ms):
        raise ValueError("hstack needs equal row counts")
    rows = tuple(tuple(itertools.chain.from_iterable(M.rows[i] for M in ms)) for i in range(n))
    return FqMatrix._trusted(F, rows, sum(M.ncols for M in ms))


def vstack(*ms: FqMatrix) -> FqMatrix:
    F, n = ms[0].field, ms[0].ncols
    if any(M.ncols != n for M in ms):
        raise ValueError("vstack needs equal column counts")
    return FqMatrix._trusted(F, tuple(itertools.chain.from_iterable(M.rows for M in ms)), n)


def _rref_rows(F: FiniteField, rows: Sequence[Sequence[int]], ncols: int):
    work = [list(r) for r in rows]
    pivots: list[int] = []
    rk = 0
    for c in range(ncols):
        p = next((i for i in range(rk, len(work)) if work[i][c]), None)
        if p is None:
            continue
        work[rk], work[p] = work[p], work[rk]
        inv = F.inv(work[rk][c])
        prow = [F.mul(inv, v) for v in work[rk]]
        work[rk] = prow
        for i in range(len(work)):
            if i != rk and work[i][c]:
                f = work[i][c]
                work[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(work[i], prow)]
        pivots.append(c)
        rk += 1
        if rk == len(work):
            break
    return [tuple(r) for r in work[:rk]], tuple(pivots)


def rref(M: FqMatrix) -> tuple[FqMatrix, int, tuple[int, ...]]:
    """Reduced row echelon basis (zero rows dropped), rank and pivot columns."""
    if M.field.order == 2:
        packed = gf2_rref(pack_row(r) for r in M.rows)
        rows = tuple(unpack_row(x, M.ncols) for x in packed)
        pivots = tuple(M.ncols - x.bit_length() for x in packed)
    else:
        rows, pivots = _rref_rows(M.field, M.rows, M.ncols)
        rows = tuple(rows)
    return FqMatrix._trusted(M.field, rows, M.ncols), len(rows), pivots


def rank(M: FqMatrix) -> int:
    if M.field.order == 2:
        return gf2_rank(pack_row(r) for r in M.rows)
    return len(_rref_rows(M.field, M.rows, M.ncols)[0])


def stack_rank(A: FqMatrix, B: FqMatrix) -> int:
    """Rank of the matrix whose rows are those of A followed by those of B."""
    if A.ncols != B.ncols:
        raise ValueError(f"column counts differ: {A.ncols} vs {B.ncols}")
    return rank(vstack(A, B))


def nullspace(M: FqMatrix) -> FqMatrix:
    """Basis (as rows) of ``{x : M x^T = 0}``, in reduced echelon form."""
    F = M.field
    R, rk, piv = rref(M)
    free = [j for j in range(M.ncols) if j not in piv]
    out = []
    for f in free:
        v = [0] * M.ncols
        v[f] = 1
        for i, p in enumerate(piv):
            v[p] = F.neg(R.rows[i][f])
        out.append(v)
    return rref(FqMatrix(F, out, M.ncols))[0] if out else FqMatrix.zeros(F, 0, M.ncols)


# -- linearized polynomials ---------------------------------------------------

@dataclass(frozen=True)
class LinearizedPoly:
    """``L(x) = sum_i coeffs[i] * x^(q^i)`` over an extension field of GF(q)."""

    field: FiniteField
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def qdegree(self) -> int:
        """Largest i with a nonzero coefficient, -1 for the zero polynomial."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def __call__(self, x: int) -> int:
        return linpoly_eval(self, x)

    def compose(self, inner: "LinearizedPoly") -> "LinearizedPoly":
        """``self(inner(x))``."""
        F = self.field
        out = [0] * max(0, len(self.coeffs) + len(inner.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(inner.coeffs):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, F.frobenius(b, i)))
        return LinearizedPoly(F, tuple(out))


def linpoly_eval(L: LinearizedPoly, x: int) -> int:
    F = L.field
    acc, xp = 0, x
    for c in L.coeffs:
        if c:
            acc = F.add(acc, F.mul(c, xp))
        xp = F.frobenius(xp)
    return acc
