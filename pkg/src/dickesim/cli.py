"""Command-line interface: run schemes, verify suites, emit tables and fits.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 capacity
error. CSV output uses a header row, comma separators, 12 significant
digits, and ``\\n`` line endings; JSON reports keep a fixed key order. Both
are byte-stable across runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .errors import (
    CapacityError,
    DimensionMismatch,
    ParameterError,
    RootBracketError,
    VerificationFailure,
)
from .formulas import (
    QUBIT_K1_MAX,
    QUTRIT_K1_MAX,
    contour_fit,
    crossover_point,
    crossover_table,
)
from .schemes import PER_LEVEL_VARIANTS, SCHEME_NAMES, SchemeSpec, run_scheme
from .verify import SUITES

FIGURES = ("fig4a", "fig4b", "contour_a", "contour_b")

# Families behind the probability tables: (family, k1, n range).
_TABLE_FAMILIES = {
    "fig4a": ("qubit", 1, range(2, 11)),
    "fig4b": ("qutrit", 1, range(3, 11)),
}
_CONTOUR_PANELS = {"contour_a": "qubit", "contour_b": "qutrit"}


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _parse_profile(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ParameterError(f"cannot parse level counts from {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _cmd_run(args: argparse.Namespace) -> int:
    spec = SchemeSpec(
        scheme=args.scheme,
        n=args.n,
        k=_parse_profile(args.k),
        p=args.p,
        herald_mode=args.herald_mode,
        variant=args.variant,
    )
    report = run_scheme(spec)
    if args.format == "json":
        _emit(json.dumps(report.to_json_dict(), indent=2) + "\n", args.out)
    else:
        header = (
            "scheme",
            "n",
            "k",
            "p",
            "probability",
            "parallel_factor",
            "formula",
            "fidelity",
        )
        row = [
            report.scheme,
            str(report.n),
            ",".join(map(str, report.k)),
            "" if report.p is None else _fmt(report.p),
            _fmt(report.probability),
            str(report.parallel_factor),
            _fmt(report.formula),
            _fmt(report.fidelity),
        ]
        _emit(_csv_text(header, [row]), args.out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = SUITES[args.suite]()
    for result in results:
        print(result.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed} passed, {failed} failed")
    return 1 if failed else 0


def _table_rows(figure: str) -> tuple[tuple[str, ...], list[list[str]], list[dict]]:
    if figure in _TABLE_FAMILIES:
        family, k1, n_range = _TABLE_FAMILIES[figure]
        header = ("n", "k", "p_op", "p_single_multiport", "p_per_level", "p_ancilla_final")
        rows = []
        records = []
        for entry in crossover_table(family, k1, n_range):
            rows.append(
                [
                    str(entry.n),
                    ",".join(map(str, entry.k)),
                    _fmt(entry.p_op),
                    _fmt(entry.p_single_multiport),
                    _fmt(entry.p_per_level),
                    _fmt(entry.p_ancilla_final),
                ]
            )
            records.append(
                {
                    "n": entry.n,
                    "k": list(entry.k),
                    "p_op": entry.p_op,
                    "p_single_multiport": entry.p_single_multiport,
                    "p_per_level": entry.p_per_level,
                    "p_ancilla_final": entry.p_ancilla_final,
                }
            )
        return header, rows, records
    panel = _CONTOUR_PANELS[figure]
    k1_max = QUBIT_K1_MAX if panel == "qubit" else QUTRIT_K1_MAX
    header = ("contour", "k1", "n_cross")
    rows = []
    records = []
    for contour in ("first", "second"):
        for k1 in range(1, k1_max + 1):
            n_cross = crossover_point(panel, contour, k1)
            rows.append([contour, str(k1), _fmt(n_cross)])
            records.append({"contour": contour, "k1": k1, "n_cross": n_cross})
    return header, rows, records


def _cmd_table(args: argparse.Namespace) -> int:
    header, rows, records = _table_rows(args.figure)
    if args.format == "csv":
        _emit(_csv_text(header, rows), args.out)
    else:
        _emit(json.dumps(records, indent=2) + "\n", args.out)
    return 0


def _cmd_fit(args: argparse.Namespace) -> int:
    fit = contour_fit(args.panel, args.contour)
    if args.format == "json":
        payload = {
            "panel": fit.panel,
            "contour": fit.contour,
            "a": fit.a,
            "b": fit.b,
            "residual_rms": fit.residual_rms,
            "points": [[k1, n] for k1, n in fit.points],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        header = ("panel", "contour", "a", "b", "residual_rms")
        row = [fit.panel, fit.contour, _fmt(fit.a), _fmt(fit.b), _fmt(fit.residual_rms)]
        _emit(_csv_text(header, [row]), args.out)
    return 0


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", metavar="PATH", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dickesim",
        description="Simulate and analyze postselected Dicke-state preparation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate one scheme end to end")
    run_p.add_argument("--scheme", choices=SCHEME_NAMES, required=True)
    run_p.add_argument("--n", type=int, required=True, help="photon count")
    run_p.add_argument("--k", required=True, help="level counts, e.g. 2,1,1")
    run_p.add_argument("--p", type=float, default=None, help="splitter transmissivity")
    run_p.add_argument("--herald-mode", type=int, default=1, dest="herald_mode")
    run_p.add_argument("--variant", choices=PER_LEVEL_VARIANTS, default="merged")
    _add_output_flags(run_p)
    run_p.set_defaults(func=_cmd_run)

    verify_p = sub.add_parser("verify", help="run a verification suite")
    verify_p.add_argument("--suite", choices=tuple(SUITES), default="all")
    verify_p.set_defaults(func=_cmd_verify)

    table_p = sub.add_parser("table", help="emit probability or contour tables")
    table_p.add_argument("--figure", choices=FIGURES, required=True)
    _add_output_flags(table_p)
    table_p.set_defaults(func=_cmd_table)

    fit_p = sub.add_parser("fit", help="fit a crossover contour line")
    fit_p.add_argument("--panel", choices=("qubit", "qutrit"), required=True)
    fit_p.add_argument("--contour", choices=("first", "second"), required=True)
    _add_output_flags(fit_p)
    fit_p.set_defaults(func=_cmd_fit)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except (ParameterError, DimensionMismatch, RootBracketError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
