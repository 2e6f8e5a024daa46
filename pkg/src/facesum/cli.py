"""Command-line interface: ``facesum invariant | jones | compare | verify | fuzz``.

Exit codes: 0 success, 1 verification or fuzz failure, 2 input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from importlib import resources

from . import fuzz as fuzzmod
from .cyclotomic import CycloInt
from .diagram import DiagramError, parse_pd
from .jones import JonesError, jones, jones_distinguishes_mirror
from .polyring import PolynomialError, load_equations, verify_invariance
from .statesum import BIT_ORDERS, DEFAULT_TABLE, amphichiral_obstruction, evaluate

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class CorpusRow:
    name: str
    pd: str
    expected: CycloInt | None = None


def bundled_table_path():
    return resources.files("facesum").joinpath("data/table.csv")


def read_corpus(text: str) -> list[CorpusRow]:
    """Rows of a ``name,pd[,expected]`` CSV."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return []
    header = [h.strip().lower() for h in header]
    if header[:2] != ["name", "pd"] or header[2:] not in ([], ["expected"]):
        raise InputError(f"corpus header must be name,pd[,expected], got {','.join(header)}")
    rows, seen = [], set()
    for lineno, rec in enumerate(reader, 2):
        if not rec or not any(f.strip() for f in rec):
            continue
        if len(rec) < 2 or len(rec) > len(header):
            raise InputError(f"line {lineno}: expected {len(header)} fields, got {len(rec)}")
        name, pd = rec[0].strip(), rec[1].strip()
        if name in seen:
            raise InputError(f"line {lineno}: duplicate name {name!r}")
        seen.add(name)
        expected = None
        if len(rec) > 2 and rec[2].strip():
            try:
                expected = CycloInt.parse(rec[2])
            except ValueError as exc:
                raise InputError(f"line {lineno}: bad expected value: {exc}") from None
        rows.append(CorpusRow(name, pd, expected))
    return rows


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _inputs(args) -> list[CorpusRow]:
    """Diagrams named on the command line: one ``--pd`` or a file.

    A file is either a corpus CSV or one PD code per line (``#`` comments).
    """
    if args.pd is not None:
        return [CorpusRow("pd", args.pd)]
    text = _read_text(args.file)
    if text.lstrip().lower().startswith("name,"):
        return read_corpus(text)
    rows = []
    for i, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(CorpusRow(f"line {i}", line))
    return rows


def matches_expected(value: CycloInt, expected: CycloInt) -> bool:
    """Equal up to a global sign and complex conjugation."""
    return any(v == expected for v in (value, -value, value.conj(), -value.conj()))


def _emit(args, payload, lines) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# Commands

def cmd_invariant(args) -> int:
    rows = _inputs(args)
    results, lines = [], []
    for row in rows:
        ev = evaluate(parse_pd(row.pd), row.name, args.bit_order,
                      method=args.method, workers=args.workers)
        results.append(ev.to_json())
        lines += [f"{ev.name}: crossings {ev.crossings}, writhe {ev.writhe:+d}, states {ev.states}",
                  f"  bracket   {ev.bracket}",
                  f"  invariant {ev.invariant}",
                  f"  {'possibly amphichiral' if ev.possibly_amphichiral else 'chiral (obstruction)'}"]
    _emit(args, results if args.file else results[0], lines)
    return EXIT_OK


def cmd_jones(args) -> int:
    results, lines = [], []
    for row in _inputs(args):
        d = parse_pd(row.pd)
        try:
            poly = jones(d)
        except JonesError as exc:
            raise InputError(f"{row.name}: {exc}") from None
        dist = jones_distinguishes_mirror(d)
        results.append({"name": row.name, "jones": poly.to_json(), "text": str(poly),
                        "distinguishes_mirror": dist})
        lines += [f"{row.name}: {poly}",
                  f"  {'differs from' if dist else 'same as'} mirror image"]
    _emit(args, results if args.file else results[0], lines)
    return EXIT_OK


def compare_row(row: CorpusRow, bit_order: str = "msb") -> dict:
    out = {"name": row.name}
    try:
        d = parse_pd(row.pd)
        ev = evaluate(d, row.name, bit_order)
    except DiagramError as exc:
        out["error"] = f"{exc.kind}: {exc}"
        return out
    facesum_chiral = not amphichiral_obstruction(ev.invariant)
    jones_chiral = jones_distinguishes_mirror(d)
    out.update({
        "crossings": ev.crossings,
        "invariant": ev.invariant.to_json(),
        "facesum": "chiral" if facesum_chiral else "undecided",
        "jones": "chiral" if jones_chiral else "undecided",
        "discrepancy": facesum_chiral != jones_chiral,
    })
    if out["discrepancy"]:
        out["favours"] = "facesum" if facesum_chiral else "jones"
    if row.expected is not None:
        out["expected"] = row.expected.to_json()
        out["matches_expected"] = matches_expected(ev.invariant, row.expected)
    return out


def compare_rows(rows: list[CorpusRow], workers: int = 1, bit_order: str = "msb") -> dict:
    job = partial(compare_row, bit_order=bit_order)
    if workers > 1 and len(rows) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, rows))
    else:
        results = [job(r) for r in rows]
    ok = [r for r in results if "error" not in r]
    checked = [r for r in ok if "matches_expected" in r]
    summary = {
        "rows": len(results),
        "row_errors": len(results) - len(ok),
        "facesum_chiral": sum(r["facesum"] == "chiral" for r in ok),
        "jones_chiral": sum(r["jones"] == "chiral" for r in ok),
        "discrepancies": sum(r["discrepancy"] for r in ok),
        "facesum_only": sum(r.get("favours") == "facesum" for r in ok),
        "jones_only": sum(r.get("favours") == "jones" for r in ok),
        "expected_checked": len(checked),
        "expected_matched": sum(r["matches_expected"] for r in checked),
    }
    return {"rows": results, "summary": summary}


def cmd_compare(args) -> int:
    text = bundled_table_path().read_text("utf-8") if args.file is None else _read_text(args.file)
    report = compare_rows(read_corpus(text), args.workers, args.bit_order)
    lines = []
    for r in report["rows"]:
        if "error" in r:
            lines.append(f"{r['name']}: ERROR {r['error']}")
            continue
        line = (f"{r['name']}: {CycloInt(*r['invariant'])}  facesum {r['facesum']}, "
                f"jones {r['jones']}")
        if r["discrepancy"]:
            line += f"  DISCREPANCY ({r['favours']})"
        if "matches_expected" in r:
            line += "  expected " + ("ok" if r["matches_expected"]
                                     else f"MISMATCH {CycloInt(*r['expected'])}")
        lines.append(line)
    s = report["summary"]
    lines.append(f"{s['rows']} rows, {s['row_errors']} errors, {s['discrepancies']} discrepancies "
                 f"({s['facesum_only']} facesum only, {s['jones_only']} jones only), "
                 f"{s['expected_matched']}/{s['expected_checked']} expected values matched")
    _emit(args, report, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        equations = load_equations(args.equations)
    except OSError as exc:
        raise InputError(f"cannot read {args.equations}: {exc.strerror}") from None
    report = verify_invariance(equations=equations)
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  [{c.detail}]" if c.detail and not c.passed else "")
             for c in report.checks]
    lines.append(f"lambda+ = {report.lambda_plus}, lambda- = {report.lambda_minus}")
    lines.append(f"{sum(c.passed for c in report.checks)}/{len(report.checks)} checks passed")
    _emit(args, report.to_json(), lines)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_fuzz(args) -> int:
    table = DEFAULT_TABLE
    if args.swap:
        a, b = args.swap
        if a not in table.values or b not in table.values:
            raise InputError(f"unknown variable in --swap {a} {b}")
        table = table.swapped(a, b)
    report = fuzzmod.run_fuzz(args.seed, args.diagrams, args.moves, table=table,
                              bit_order=args.bit_order, check_mirror=not args.no_mirror)
    lines = [f"seed {report.seed}: {report.diagrams} diagrams x {report.moves} moves, "
             f"{report.checked} diagrams checked, up to {report.max_crossings} crossings"]
    cx = report.counterexample
    if cx is None:
        lines.append("PASS")
    else:
        lines.append(f"FAIL: {cx.reason}")
        lines.append(f"  start   {cx.base.to_pd()}")
        lines += [f"  move    {step}" for step in cx.steps()]
        lines.append(f"  result  {cx.final().to_pd()}")
        lines.append(f"  expected {cx.expected}, got {cx.got}")
    _emit(args, report.to_json(), lines)
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="facesum", description="Face state-sum link invariant in Z[zeta_5].")
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p, required=True):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--pd", help="PD code, e.g. 'X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)'")
        g.add_argument("--file", help="corpus CSV or one PD code per line")

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("invariant", help="writhe, state count, bracket and invariant")
    source(p)
    common(p)
    p.add_argument("--bit-order", choices=BIT_ORDERS, default="msb",
                   help="crossing code bit order (lsb is a diagnostic, not an invariant)")
    p.add_argument("--method", choices=("sweep", "enumerate"), default="sweep")
    p.add_argument("--workers", type=_positive, default=1, help="processes for --method enumerate")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("jones", help="Jones polynomial and mirror test")
    source(p)
    common(p)
    p.set_defaults(func=cmd_jones)

    p = sub.add_parser("compare", help="chirality verdicts of both invariants over a corpus")
    p.add_argument("--file", help="CSV with header name,pd[,expected] (default: bundled table)")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--bit-order", choices=BIT_ORDERS, default="msb")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="check the invariance equations symbolically and numerically")
    p.add_argument("--equations", help="equation file (default: bundled)")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", help="random move-invariance testing")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--diagrams", type=_positive, default=50)
    p.add_argument("--moves", type=_positive, default=20)
    p.add_argument("--bit-order", choices=BIT_ORDERS, default="msb")
    p.add_argument("--no-mirror", action="store_true", help="skip the mirror-law check")
    p.add_argument("--swap", nargs=2, metavar=("VAR", "VAR"),
                   help="exchange two variable values first (mutation test hook)")
    common(p)
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DiagramError, InputError, PolynomialError) as exc:
        kind = f"{exc.kind}: " if isinstance(exc, DiagramError) else ""
        print(f"error: {kind}{exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
