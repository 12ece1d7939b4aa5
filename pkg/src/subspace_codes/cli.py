"""Command-line front end: construct, decode, bounds, enumerate, distances, simulate.

Exit status: 0 on success, 1 when ``decode`` reports FAILURE, 2 on usage
errors and malformed input files.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from collections import Counter
from typing import Sequence

import numpy as np

from . import io as fmt
from .channel import ChannelSpec, run_experiment
from .constructions import AugmentedKK, Cdc, LiftedCode, kk_code
from .covering import bounds_report, greedy_covering_construct, permuted_lifting_witness
from .decoders import ReceivedSpace, decode_augmented, kk_bounded_decode, nearest_codeword_oracle
from .grassmann import (ResourceLimitError, enumerate_grassmannian, gaussian_binomial,
                        grassmannian, injection_distance, pairwise_injection_distances,
                        subspace_distance)


class UsageError(Exception):
    pass


# -- output ------------------------------------------------------------------

def render(records: list[dict], style: str) -> str:
    if not records:
        return ""
    cols = list(records[0])
    for rec in records[1:]:
        cols += [c for c in rec if c not in cols]
    if style == "json-lines":
        return "".join(json.dumps(rec, sort_keys=False) + "\n" for rec in records)
    if style == "csv":
        out = _io.StringIO()
        w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for rec in records:
            w.writerow({c: _cell(rec.get(c)) for c in cols})
        return out.getvalue()
    cells = [[_cell(rec.get(c)) for c in cols] for rec in records]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    return "" if v is None else str(v)


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_code(path: str) -> Cdc:
    try:
        with open(path, encoding="ascii") as fh:
            return fmt.read_cdc(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read code file {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise fmt.FormatError(f"{path} is not a text file") from None


def load_matrix(path: str):
    try:
        with open(path, encoding="ascii") as fh:
            return fmt.read_matrix(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read matrix file {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise fmt.FormatError(f"{path} is not a text file") from None


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or comma list, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


# -- subcommands -------------------------------------------------------------

def cmd_construct(args) -> int:
    q, n, r = args.q, args.n, args.r
    if args.kind in ("kk", "augmented-kk"):
        if args.d is None:
            raise UsageError(f"construct {args.kind} needs --d")
        if args.kind == "kk":
            code = kk_code(q, n, r, args.d)
        else:
            code = AugmentedKK(q, n, r, args.d).to_cdc()
    else:
        if args.rho is None:
            raise UsageError(f"construct {args.kind} needs --rho")
        if args.kind == "greedy-covering":
            code = greedy_covering_construct(q, n, r, args.rho)
        else:
            code = permuted_lifting_witness(q, n, r, args.rho)
    text = fmt.write_cdc(code)
    emit(text, args.out)
    if args.out:
        summary = [{"construction": args.kind, "q": q, "n": n, "r": r, "words": len(code),
                    "file": args.out}]
        sys.stdout.write(render(summary, args.format))
    return 0


def cmd_decode(args) -> int:
    code = load_code(args.code)
    A = load_matrix(args.received)
    if A.field.order != code.q or A.ncols != code.n:
        raise fmt.FormatError(f"reception is {A.nrows}x{A.ncols} over GF({A.field.order}), "
                              f"code lives in GF({code.q})^{code.n}")
    kind = code.metadata.get("construction")
    rec = ReceivedSpace(A)
    if kind == "augmented-kk":
        res = decode_augmented(fmt.augmented_from_cdc(code), A, metric=args.metric)
        word, branch = res.word, res.branch
    elif kind == "kk":
        layer = LiftedCode.build(code.q, code.r, code.n - code.r, code.declared_d)
        hit = kk_bounded_decode(layer, A)
        word = None if hit is None else hit[0]
        branch = "kk: within d-1" if hit else "failure: kk beyond d-1"
    else:
        near, _, unique = nearest_codeword_oracle(code.words, A)
        word = near if unique else None
        branch = "exhaustive: unique nearest" if unique else "failure: nearest not unique"
    if word is None:
        rows = [{"result": "FAILURE", "distance": None, "branch": branch}]
    else:
        dist = subspace_distance(rec.space, word) if args.metric == "subspace" else \
            injection_distance(rec.space, word)
        rows = [{"result": " / ".join(fmt.format_row(row, code.q) for row in word.basis.rows),
                 "distance": dist, "branch": branch}]
    emit(render(rows, args.format), args.out)
    return 0 if word is not None else 1


def cmd_bounds(args) -> int:
    grid = [(q, n, r, rho) for q in args.q for n in args.n for r in args.r for rho in args.rho]
    records = []
    for q, n, r, rho in grid:
        try:
            rep = bounds_report(q, n, r, rho, exact=args.exact, witnesses=args.witnesses)
        except ValueError as exc:
            if len(grid) == 1:
                raise UsageError(str(exc)) from None
            continue
        records += rep.records()
        if args.exact and rep.exact is None:
            records.append({"q": q, "n": n, "r": r, "rho": rho, "name": "exact_K_C",
                            "side": "exact", "value": None, "note": "search limit reached"})
        records.append({"q": q, "n": n, "r": r, "rho": rho, "name": "sandwich",
                        "side": "check", "value": int(rep.sandwich_holds()),
                        "note": f"best lower {rep.best_lower}, best upper {rep.best_upper}"})
    emit(render(records, args.format), args.out)
    return 0


def cmd_enumerate(args) -> int:
    if args.count:
        rows = [{"q": args.q, "n": args.n, "r": args.r,
                 "count": gaussian_binomial(args.n, args.r, args.q)}]
        emit(render(rows, args.format), args.out)
        return 0
    words = list(enumerate_grassmannian(args.q, args.n, args.r, cap=args.cap))
    emit(fmt.write_subspaces(words, args.q, args.n, args.r), args.out)
    return 0


def cmd_distances(args) -> int:
    if args.code:
        code = load_code(args.code)
        words = list(code.words)
    else:
        if None in (args.q, args.n, args.r):
            raise UsageError("distances needs --code or all of --q --n --r")
        words = grassmannian(args.q, args.n, args.r, cap=args.cap)
    if len(words) > args.cap:
        raise ResourceLimitError(f"{len(words)} words exceeds pairwise cap {args.cap}")
    hist: Counter = Counter()
    block = 512
    for s in range(0, len(words), block):
        D = pairwise_injection_distances(words[s:s + block], words)
        if args.metric == "subspace":
            D = 2 * D
        for i in range(D.shape[0]):
            row = D[i, s + i + 1:]
            vals, counts = np.unique(row, return_counts=True)
            for v, c in zip(vals.tolist(), counts.tolist()):
                hist[v] += c
    if args.format == "csv":
        text = fmt.histogram_csv(dict(hist))
    else:
        text = render([{"d": d, "count": hist[d]} for d in sorted(hist)], args.format)
    emit(text, args.out)
    return 0


def cmd_simulate(args) -> int:
    code = load_code(args.code)
    target = fmt.augmented_from_cdc(code) if code.metadata.get("construction") == "augmented-kk" else code
    spec = ChannelSpec(args.erasures, args.insertions, args.seed)
    if spec.erasures < 0 or spec.insertions < 0 or spec.erasures > code.r \
            or code.r - spec.erasures + spec.insertions > code.n:
        raise UsageError(f"channel ({spec.erasures}, {spec.insertions}) is infeasible for "
                         f"dimension {code.r} in GF({code.q})^{code.n}")
    rep = run_experiment(target, spec, args.trials)
    emit(render([rep.as_dict()], args.format), args.out)
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="experiment seed (default 0)")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("table", "csv", "json-lines"), default="table")

    p = argparse.ArgumentParser(prog="subspace-codes",
                                description="Constant-dimension subspace codes: construction, "
                                            "decoding, covering bounds and channel simulation.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build a code and write it as a code file")
    c.add_argument("kind", choices=("kk", "augmented-kk", "permuted-lifting-covering", "greedy-covering"))
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--d", type=int, help="minimum injection distance (kk, augmented-kk)")
    c.add_argument("--rho", type=int, help="covering radius (covering constructions)")
    c.set_defaults(func=cmd_construct)

    d = sub.add_parser("decode", parents=[common], help="decode a received matrix against a code file")
    d.add_argument("--code", required=True)
    d.add_argument("--received", required=True, help="matrix file holding the received matrix")
    d.add_argument("--metric", choices=("subspace", "injection"), default="subspace")
    d.set_defaults(func=cmd_decode)

    b = sub.add_parser("bounds", parents=[common], help="covering bounds on K_C(q, n, r, rho)")
    for name in ("q", "n", "r", "rho"):
        b.add_argument(f"--{name}", type=_int_list, required=True, help="integer or comma list")
    b.add_argument("--exact", action="store_true", help="also run the exhaustive minimum covering search")
    b.add_argument("--witnesses", action="store_true", help="build witness codes and measure their radii")
    b.set_defaults(func=cmd_bounds)

    e = sub.add_parser("enumerate", parents=[common], help="list the Grassmannian E_r(q, n)")
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--r", type=int, required=True)
    e.add_argument("--count", action="store_true", help="print the count only")
    e.add_argument("--cap", type=int, default=10 ** 6)
    e.set_defaults(func=cmd_enumerate)

    h = sub.add_parser("distances", parents=[common], help="pairwise distance histogram")
    h.add_argument("--code")
    h.add_argument("--q", type=int)
    h.add_argument("--n", type=int)
    h.add_argument("--r", type=int)
    h.add_argument("--metric", choices=("injection", "subspace"), default="injection")
    h.add_argument("--cap", type=int, default=20000)
    h.set_defaults(func=cmd_distances)

    s = sub.add_parser("simulate", parents=[common], help="seeded operator-channel decoding experiment")
    s.add_argument("--code", required=True)
    s.add_argument("--erasures", type=int, required=True)
    s.add_argument("--insertions", type=int, required=True)
    s.add_argument("--trials", type=int, default=1000)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, fmt.FormatError, ResourceLimitError, ValueError) as exc:
        print(f"subspace-codes {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
