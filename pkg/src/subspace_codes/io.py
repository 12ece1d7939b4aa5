"""Text formats for matrices, subspace sets, codes and distance histograms.

Matrix record::

    q rows cols
    <row>            one line per row: base-q digits when q <= 10,
    ...              space-separated element indices otherwise

A file of records starts with its own header line (``q n r count [d]`` for
codes, ``q m n count`` for rank codebooks); ``#`` lines hold ``key=value``
metadata.
"""

from __future__ import annotations

import csv
import io as _io
from typing import Sequence

from .constructions import AugmentedKK, Cdc
from .ff import GF, FqMatrix
from .grassmann import Subspace
from .rank_metric import RankCodebook


class FormatError(ValueError):
    """Malformed input file."""


def format_row(row: Sequence[int], q: int) -> str:
    if q <= 10:
        return "".join(str(v) for v in row)
    return " ".join(str(v) for v in row)


def parse_row(line: str, q: int, ncols: int) -> tuple[int, ...]:
    s = line.strip()
    if q <= 10 and " " not in s:
        vals = [int(c) for c in s] if s else []
    else:
        vals = [int(t) for t in s.split()]
    if len(vals) != ncols:
        raise FormatError(f"row {line!r} has {len(vals)} entries, expected {ncols}")
    if any(not 0 <= v < q for v in vals):
        raise FormatError(f"row {line!r} has entries outside GF({q})")
    return tuple(vals)


def write_matrix(M: FqMatrix) -> str:
    q = M.field.order
    lines = [f"{q} {M.nrows} {M.ncols}"] + [format_row(r, q) for r in M.rows]
    return "\n".join(lines) + "\n"


def _ints(line: str, n: int, what: str) -> list[int]:
    parts = line.split()
    if len(parts) != n:
        raise FormatError(f"{what} header {line!r} needs {n} integers")
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise FormatError(f"{what} header {line!r}: {exc}") from None


class _Lines:
    def __init__(self, text: str):
        self.meta: dict[str, str] = {}
        self._lines = []
        for raw in text.splitlines():
            s = raw.strip()
            if not s:
                continue
            if s.startswith("#"):
                body = s[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    self.meta[k.strip()] = v.strip()
                continue
            self._lines.append(s)
        self._i = 0

    def next(self, what: str) -> str:
        if self._i >= len(self._lines):
            raise FormatError(f"unexpected end of file while reading {what}")
        s = self._lines[self._i]
        self._i += 1
        return s

    def done(self) -> bool:
        return self._i >= len(self._lines)


def _read_matrix(L: _Lines, q_expected: int | None = None, ncols_expected: int | None = None) -> FqMatrix:
    q, rows, cols = _ints(L.next("matrix header"), 3, "matrix")
    if q_expected is not None and q != q_expected:
        raise FormatError(f"matrix over GF({q}) in a GF({q_expected}) file")
    if ncols_expected is not None and cols != ncols_expected:
        raise FormatError(f"matrix has {cols} columns, expected {ncols_expected}")
    try:
        F = GF(q)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    data = [parse_row(L.next("matrix row"), q, cols) for _ in range(rows)]
    return FqMatrix(F, data, cols)


def read_matrix(text: str) -> FqMatrix:
    L = _Lines(text)
    M = _read_matrix(L)
    if not L.done():
        raise FormatError("trailing content after matrix")
    return M


def write_subspaces(words: Sequence[Subspace], q: int, n: int, r: int, d: int | None = None,
                    meta: dict | None = None) -> str:
    out = _io.StringIO()
    out.write(f"{q} {n} {r} {len(words)}" + (f" {d}" if d is not None else "") + "\n")
    for k in sorted(meta or {}):
        out.write(f"# {k}={meta[k]}\n")
    for U in words:
        out.write(write_matrix(U.basis))
    return out.getvalue()


def write_cdc(code: Cdc) -> str:
    return write_subspaces(code.words, code.q, code.n, code.r, code.declared_d, code.metadata)


def read_cdc(text: str) -> Cdc:
    L = _Lines(text)
    header = L.next("code header").split()
    if len(header) not in (4, 5):
        raise FormatError("code header must be 'q n r count [d]'")
    try:
        q, n, r, count = (int(x) for x in header[:4])
        d = int(header[4]) if len(header) == 5 else None
    except ValueError:
        raise FormatError("code header must contain integers") from None
    words = []
    for _ in range(count):
        M = _read_matrix(L, q, n)
        U = Subspace(M)
        if U.dim != r:
            raise FormatError(f"record of rank {U.dim} in a dimension-{r} code")
        words.append(U)
    if not L.done():
        raise FormatError("more records than the header count")
    meta = {k: _maybe_int(v) for k, v in L.meta.items()}
    try:
        return Cdc(q, n, r, tuple(words), d, meta)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _maybe_int(v: str):
    try:
        return int(v)
    except ValueError:
        return v


def write_codebook(book: RankCodebook) -> str:
    out = [f"{book.q} {book.m} {book.n} {len(book)}\n"]
    out += [write_matrix(W) for W in book.words]
    return "".join(out)


def read_codebook(text: str) -> RankCodebook:
    L = _Lines(text)
    q, m, n, count = _ints(L.next("codebook header"), 4, "codebook")
    words = []
    for _ in range(count):
        W = _read_matrix(L, q, n)
        if W.nrows != m:
            raise FormatError(f"codebook word has {W.nrows} rows, expected {m}")
        words.append(W)
    if not L.done():
        raise FormatError("more records than the header count")
    return RankCodebook(q, m, n, tuple(words))


def augmented_from_cdc(code: Cdc) -> AugmentedKK:
    """Rebuild the layered structure recorded in an augmented-KK code file."""
    if code.metadata.get("construction") != "augmented-kk":
        raise FormatError("file does not describe an augmented KK code")
    d = code.metadata.get("d", code.declared_d)
    if not isinstance(d, int):
        raise FormatError("augmented KK file lacks d")
    E = AugmentedKK(code.q, code.n, code.r, d)
    if E.size != len(code):
        raise FormatError(f"file has {len(code)} words, construction gives {E.size}")
    if set(E.words()) != set(code.words):
        raise FormatError("file words differ from the rebuilt construction")
    return E


def histogram_csv(hist: dict[int, int]) -> str:
    out = _io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["d", "count"])
    for d in sorted(hist):
        w.writerow([d, hist[d]])
    return out.getvalue()


def read_histogram_csv(text: str) -> dict[int, int]:
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["d", "count"]:
        raise FormatError("histogram CSV must start with 'd,count'")
    return {int(a): int(b) for a, b in rows[1:] if a.strip()}
