"""Command-line front end.

Subcommands:
  compute   spectral pages of one algebra (or a batch), as text/json/csv/latex
  catalog   list built-in algebras, run the golden checks, print the census
  check     run the structural checkers on one algebra

Exit codes are a contract: 0 success, 2 parse error, 3 validation error
(well-formed input that is not a nilpotent Lie algebra), 4 internal
consistency failure.  Batch lines are independent; the worst outcome wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import catalog as catalog_mod
from .exterior import CochainComplexError
from .lie import (
    AlgebraFormatError,
    IndexPairError,
    IndexRangeError,
    JacobiError,
    LieAlgebra,
    NotNilpotentError,
    SalamonSyntaxError,
    algebra_from_json,
    m0,
    parse_salamon,
    to_salamon,
)
from .spectral import (
    InternalConsistencyError,
    SpectralTable,
    check_top_degree_forms,
    check_limit_edges,
    check_abelian_extension,
    complex_for,
    table_for,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_INTERNAL = 4

_PARSE_ERRORS = (SalamonSyntaxError, IndexRangeError, IndexPairError, AlgebraFormatError)
_VALIDATION_ERRORS = (JacobiError, NotNilpotentError)
_INTERNAL_ERRORS = (InternalConsistencyError, CochainComplexError)


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, _PARSE_ERRORS):
        return EXIT_PARSE
    if isinstance(exc, _VALIDATION_ERRORS):
        return EXIT_VALIDATION
    if isinstance(exc, _INTERNAL_ERRORS):
        return EXIT_INTERNAL
    raise exc


def _worker_count(n_items: int) -> int:
    cap = os.environ.get("NILSPEC_THREADS")
    if cap:
        try:
            cap_n = max(1, int(cap))
        except ValueError:
            cap_n = 1
    else:
        cap_n = os.cpu_count() or 1
    return max(1, min(cap_n, n_items))


# ---------------------------------------------------------------------------
# table rendering
# ---------------------------------------------------------------------------

def _page_items(table: SpectralTable, pages: str) -> list[tuple[str, tuple]]:
    """(label, grid) pairs for the requested page selection."""
    if pages == "limit":
        return [("limit", table.limit)]
    if pages == "all":
        selected = sorted(r for r in table.pages if r <= max(table.r0, 0))
    else:
        try:
            selected = sorted({int(p) for p in pages.split(",")})
        except ValueError:
            raise SalamonSyntaxError(f"bad page selection {pages!r}", 1)
    items = [(str(r), table.grid(r)) for r in selected]
    items.append(("limit", table.limit))
    return items


def _render_text(table: SpectralTable, meta: dict, pages: str) -> str:
    lines = []
    name = meta.get("id") or meta.get("label")
    head = f"{name}: " if name else ""
    lines.append(f"{head}{meta['salamon']}")
    lines.append(f"m = {table.m}, k = {table.k}, r0 = {table.r0}, "
                 f"betti = {list(table.betti)}")
    half = (table.m + 1) // 2
    lines.append(f"(degeneration bound k = {table.k}; the conjectured bound "
                 f"ceil(m/2) = {half} is {'met' if table.r0 <= half else 'exceeded'} here)")
    width = max(len(str(x)) for _, grid in _page_items(table, pages) for row in grid for x in row)
    for label, grid in _page_items(table, pages):
        title = "E_oo (limit)" if label == "limit" else f"E_{label}"
        if label != "limit" and int(label) == table.r0:
            title += " = E_oo"
        lines.append(title)
        for row in grid:
            lines.append("  " + " ".join(str(x).rjust(width) for x in row))
    return "\n".join(lines)


def _render_latex(table: SpectralTable, meta: dict, pages: str) -> str:
    lines = []
    for label, grid in _page_items(table, pages):
        title = "E_\\infty" if label == "limit" else f"E_{label}"
        lines.append(f"% {title}")
        lines.append("\\begin{tabular}{|" + "c|" * (table.m + 1) + "}")
        lines.append("\\hline")
        for row in grid:
            lines.append(" & ".join(str(x) for x in row) + " \\\\")
            lines.append("\\hline")
        lines.append("\\end{tabular}")
    return "\n".join(lines)


def _render_csv(table: SpectralTable, meta: dict, pages: str) -> str:
    lines = ["page,p,q,total_degree,dim"]
    for label, grid in _page_items(table, pages):
        for row_idx, row in enumerate(grid):
            p = table.k - 1 - row_idx
            for deg, dim in enumerate(row):
                lines.append(f"{label},{p},{deg - p},{deg},{dim}")
    return "\n".join(lines)


def table_json(table: SpectralTable, meta: dict) -> dict:
    return {
        "id": meta.get("id"),
        "salamon": meta["salamon"],
        "m": table.m,
        "k": table.k,
        "r0": table.r0,
        "betti": list(table.betti),
        "pages": {str(r): [list(row) for row in grid]
                  for r, grid in sorted(table.pages.items()) if r <= table.r0},
        "limit": [list(row) for row in table.limit],
    }


def render_table(table: SpectralTable, meta: dict, fmt: str, pages: str) -> str:
    if fmt == "text":
        return _render_text(table, meta, pages)
    if fmt == "json":
        return json.dumps(table_json(table, meta), indent=2)
    if fmt == "csv":
        return _render_csv(table, meta, pages)
    if fmt == "latex":
        return _render_latex(table, meta, pages)
    raise ValueError(f"unknown format {fmt}")


# ---------------------------------------------------------------------------
# input handling
# ---------------------------------------------------------------------------

def _load_algebra(text: str) -> LieAlgebra:
    """A salamon string, or a path to a salamon / JSON algebra file."""
    candidate = text.strip()
    if candidate.startswith("("):
        return parse_salamon(candidate)
    if os.path.exists(candidate):
        content = open(candidate, encoding="utf-8").read().strip()
        if content.startswith("{"):
            try:
                doc = json.loads(content)
            except json.JSONDecodeError as exc:
                raise AlgebraFormatError(f"bad JSON in {candidate}: {exc}") from exc
            return algebra_from_json(doc)
        return parse_salamon(content)
    raise SalamonSyntaxError(f"input {candidate!r} is neither a '(...)' string nor a file", 1)


def _resolve_input(args: argparse.Namespace) -> LieAlgebra:
    if args.m0 is not None:
        return m0(args.m0)
    if args.input is None:
        raise SalamonSyntaxError("no input given (pass a salamon string, a file, or --m0 N)", 1)
    return _load_algebra(args.input)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_compute(args: argparse.Namespace) -> int:
    if args.batch:
        return _run_batch(args)
    try:
        algebra = _resolve_input(args)
        table = table_for(algebra, max_page=args.max_page)
    except Exception as exc:  # mapped to the exit-code contract
        code = _exit_code_for(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code
    meta = {"salamon": to_salamon(algebra), "id": None, "label": algebra.label}
    print(render_table(table, meta, args.format, args.pages))
    return EXIT_OK


def _batch_line(line: str, args: argparse.Namespace) -> tuple[int, str]:
    try:
        algebra = _load_algebra(line)
        table = table_for(algebra, max_page=args.max_page)
    except Exception as exc:  # mapped to the exit-code contract
        code = _exit_code_for(exc)
        return code, f"error: {line.strip()}: {exc}"
    meta = {"salamon": to_salamon(algebra), "id": None, "label": algebra.label}
    if args.format == "json":
        return EXIT_OK, json.dumps(table_json(table, meta))
    return EXIT_OK, render_table(table, meta, args.format, args.pages)


def _run_batch(args: argparse.Namespace) -> int:
    source = args.input or "-"
    stream = sys.stdin if source == "-" else open(source, encoding="utf-8")
    lines = [line for line in stream.read().splitlines() if line.strip()]
    if stream is not sys.stdin:
        stream.close()
    if not lines:
        return EXIT_OK
    with ThreadPoolExecutor(max_workers=_worker_count(len(lines))) as pool:
        results = list(pool.map(lambda ln: _batch_line(ln, args), lines))
    worst = EXIT_OK
    for code, text in results:
        print(text, file=sys.stdout if code == EXIT_OK else sys.stderr)
        worst = max(worst, code)
    return worst


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.census is not None:
        classes, distinct = catalog_mod.distinct_table_census(args.census)
        print(f"{classes} classes, {distinct} distinct tables")
        return EXIT_OK
    entries = catalog_mod.list_entries(args.dim)
    if not args.check:
        for e in entries:
            extra = f"  [{e.label}]" if e.label else ""
            if e.decomposition:
                extra += f"  (R^{e.decomposition[0]} (+) {e.decomposition[1]})"
            print(f"{e.id:10s} {e.salamon}{extra}")
        return EXIT_OK
    worst = EXIT_OK
    reports = []
    for e in entries:
        try:
            algebra = e.algebra()
            table = table_for(algebra, max_page=max(e.golden_pages))
            comp = complex_for(algebra)
            golden = catalog_mod.golden_check(e, table)
            edges = check_limit_edges(table, comp)
            lemma = check_top_degree_forms(comp)
            ok = golden.ok and edges.ok and lemma.ok
            if not ok:
                worst = max(worst, EXIT_INTERNAL)
            notes = []
            for mm in golden.suspect_mismatches:
                notes.append(f"suspect cell page {mm.page} [{mm.row}][{mm.col}]: "
                             f"printed {mm.stored}, engine {mm.computed}")
            for mm in golden.hard_mismatches:
                notes.append(f"MISMATCH page {mm.page} [{mm.row}][{mm.col}]: "
                             f"stored {mm.stored}, engine {mm.computed}")
            notes.extend(edges.violations)
            notes.extend(lemma.violations)
            reports.append({"id": e.id, "ok": ok, "r0": golden.r0_computed, "notes": notes})
        except Exception as exc:  # mapped to the exit-code contract
            worst = max(worst, _exit_code_for(exc))
            reports.append({"id": e.id, "ok": False, "r0": None, "notes": [str(exc)]})
    if args.format == "json":
        print(json.dumps(reports, indent=2))
    else:
        for rep in reports:
            print(f"{'PASS' if rep['ok'] else 'FAIL'} {rep['id']}"
                  + "".join(f"\n      {n}" for n in rep["notes"]))
        print(f"{sum(r['ok'] for r in reports)}/{len(reports)} entries pass")
    return worst


def _parse_page(text: str) -> int | None:
    return None if text in ("limit", "inf", "oo") else int(text)


def cmd_check(args: argparse.Namespace) -> int:
    try:
        algebra = _resolve_input(args)
    except Exception as exc:  # mapped to the exit-code contract
        code = _exit_code_for(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code
    run_all = not (args.theorems or args.lemma or args.direct_sum is not None)
    reports = []
    try:
        if args.theorems or run_all:
            table = table_for(algebra)
            reports.append(check_limit_edges(table, complex_for(algebra)))
        if args.lemma or run_all:
            reports.append(check_top_degree_forms(complex_for(algebra)))
        if args.direct_sum is not None:
            for page in (args.page or ["limit"]):
                reports.append(check_abelian_extension(algebra, _parse_page(page), s=args.direct_sum))
    except Exception as exc:  # mapped to the exit-code contract
        code = _exit_code_for(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code
    if args.format == "json":
        print(json.dumps([{"name": r.name, "ok": r.ok, "checks": r.checks,
                           "violations": list(r.violations)} for r in reports], indent=2))
    else:
        for r in reports:
            print(f"{'PASS' if r.ok else 'FAIL'} {r.name} ({r.checks} checks)"
                  + "".join(f"\n      {v}" for v in r.violations))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_INTERNAL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilspec",
        description="Spectral sequences of nilpotent Lie algebras, exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="compute and print page tables")
    p_compute.add_argument("input", nargs="?", help="salamon string, or a file path")
    p_compute.add_argument("--m0", type=int, metavar="N",
                           help="use the filiform algebra of dimension N")
    p_compute.add_argument("--pages", default="all",
                           help="'all' (default: 0..r0), 'limit', or a comma list like 0,1,2")
    p_compute.add_argument("--max-page", type=int, default=None,
                           help="also compute pages beyond r0, up to this index")
    p_compute.add_argument("--format", choices=("text", "json", "csv", "latex"), default="text")
    p_compute.add_argument("--batch", action="store_true",
                           help="treat input (or stdin with '-') as one salamon string per line")
    p_compute.set_defaults(func=cmd_compute)

    p_catalog = sub.add_parser("catalog", help="browse or verify the built-in catalog")
    p_catalog.add_argument("--dim", type=int, default=None)
    p_catalog.add_argument("--check", action="store_true",
                           help="golden tables plus structural checkers over the selection")
    p_catalog.add_argument("--census", type=int, metavar="DIM",
                           help="print (classes, distinct limit tables) for a dimension")
    p_catalog.add_argument("--format", choices=("text", "json"), default="text")
    p_catalog.set_defaults(func=cmd_catalog)

    p_check = sub.add_parser("check", help="run structural checkers on one algebra")
    p_check.add_argument("input", nargs="?", help="salamon string, or a file path")
    p_check.add_argument("--m0", type=int, metavar="N")
    p_check.add_argument("--theorems", action="store_true",
                         help="limit-edge identities (degrees 0, 1, m-1, m)")
    p_check.add_argument("--lemma", action="store_true",
                         help="top-degree closed/exact characterisation")
    p_check.add_argument("--direct-sum", type=int, metavar="S",
                         help="direct-sum identities for R^S (+) this algebra")
    p_check.add_argument("--page", action="append",
                         help="page for --direct-sum: an integer or 'limit' (repeatable)")
    p_check.add_argument("--format", choices=("text", "json"), default="text")
    p_check.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
