"""Command-line front end.

Subcommands: cells, poincare, r0, verify, generic-flag, count, profile.
JSON is the canonical output format and is byte-deterministic for a fixed
configuration (including the seed); CSV and text are convenience views.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .combinatorics import (
    Composition,
    HessenbergFunction,
    Permutation,
    format_tableau,
    tableau_of,
)
from .domains import Poly
from .exactla import generic_flag, hess_zero_coordinates
from .oracle import BudgetExceededError, variety_point_count
from .paving import (
    enumerate_cells,
    inversion_profile,
    poincare,
    r0_tableau,
    zero_dim_cells,
)
from .verify import run_verification

VERSION = "0.1.0"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3


class InputError(Exception):
    """Invalid command-line input; message lists every violated constraint."""


def _parse_int_list(text: str, label: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise InputError(f"{label} must be a comma-separated list of integers, got {text!r}")


def _parse_lambda(text: str) -> Composition:
    parts = _parse_int_list(text, "--lambda")
    try:
        lam = Composition(parts)
    except ValueError as e:
        raise InputError(f"--lambda: {e}")
    if lam.n < 1:
        raise InputError("--lambda must have at least one box")
    return lam


def _parse_h(text: str, n: int) -> HessenbergFunction:
    if text == "springer":
        return HessenbergFunction.springer(n)
    values = _parse_int_list(text, "--h")
    problems = []
    if len(values) != n:
        problems.append(f"--h has {len(values)} values but n={n}")
    try:
        h = HessenbergFunction(values)
    except ValueError as e:
        problems.append(f"--h: {e}")
        h = None
    if problems:
        raise InputError("; ".join(problems))
    return h


def _parse_w(text: str, n: int) -> Permutation:
    word = _parse_int_list(text, "--w")
    problems = []
    if len(word) != n:
        problems.append(f"--w has {len(word)} values but n={n}")
    try:
        return Permutation(word)
    except ValueError as e:
        problems.append(f"--w: {e}")
        raise InputError("; ".join(problems))


def _header(args, command: str) -> dict:
    header = {
        "lambda": list(_parse_lambda(args.lam).parts),
        "h": "springer" if args.h == "springer" else _parse_int_list(args.h, "--h"),
        "command": command,
        "version": VERSION,
    }
    if getattr(args, "seed", None) is not None:
        header["seed"] = args.seed
    return header


def _emit(args, payload: dict, csv_rows: list[str] | None, text: str) -> None:
    if args.format == "json":
        out = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    elif args.format == "csv":
        out = "\n".join(csv_rows or []) + "\n"
    else:
        out = text + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(out)
    else:
        sys.stdout.write(out)


def _poly_str(p) -> str:
    return repr(p)


def cmd_cells(args) -> int:
    lam = _parse_lambda(args.lam)
    h = _parse_h(args.h, lam.n)
    cells = enumerate_cells(lam, h)
    payload = dict(_header(args, "cells"))
    payload["cells"] = [
        {
            "w": list(c.w.word),
            "tableau": [list(r) for r in c.tableau.rows],
            "inversions": [list(p) for p in c.hess_inv.sorted_pairs()],
            "dim": c.dim,
        }
        for c in cells
    ]
    payload["count"] = len(cells)
    csv_rows = ["w;dim;inversions"] + [
        ",".join(str(v) for v in c.w.word)
        + f";{c.dim};"
        + " ".join(f"({k},{l})" for k, l in c.hess_inv.sorted_pairs())
        for c in cells
    ]
    lines = [f"{len(cells)} cells for lambda={lam}, h={h}"]
    for c in cells:
        lines.append(f"w={c.w}  dim={c.dim}  inv={c.hess_inv.sorted_pairs()}")
    _emit(args, payload, csv_rows, "\n".join(lines))
    return EXIT_OK


def cmd_poincare(args) -> int:
    lam = _parse_lambda(args.lam)
    h = _parse_h(args.h, lam.n)
    data = poincare(lam, h)
    payload = dict(_header(args, "poincare"))
    payload["coefficients"] = list(data.coeffs)
    payload["total_cells"] = data.total_cells
    payload["empty"] = data.total_cells == 0
    csv_rows = ["k;cells_of_dim_k"] + [
        f"{k};{c}" for k, c in enumerate(data.coeffs)
    ]
    if data.total_cells == 0:
        text = f"lambda={lam}, h={h}: variety is EMPTY"
    else:
        poly = " + ".join(
            (f"{c}*q^{k}" if k else str(c)) for k, c in enumerate(data.coeffs) if c
        )
        text = f"lambda={lam}, h={h}: {data.total_cells} cells, P(q) = {poly}"
    _emit(args, payload, csv_rows, text)
    return EXIT_OK


def cmd_r0(args) -> int:
    lam = _parse_lambda(args.lam)
    h = _parse_h(args.h, lam.n)
    r0 = r0_tableau(lam, h)
    payload = dict(_header(args, "r0"))
    if r0 is None:
        payload["r0"] = None
        payload["empty"] = True
        _emit(args, payload, ["EMPTY"], "EMPTY")
        return EXIT_OK
    zeros = zero_dim_cells(lam, h)
    unique = len(zeros) == 1 and zeros[0].rows == r0.rows
    payload["r0"] = [list(r) for r in r0.rows]
    payload["empty"] = False
    payload["unique_zero_cell"] = unique
    text = format_tableau(r0)
    _emit(args, payload, [" ".join(str(v) for v in row) for row in r0.rows], text)
    return EXIT_OK if unique else EXIT_VERIFY_FAILED


def cmd_verify(args) -> int:
    lam = _parse_lambda(args.lam)
    h = _parse_h(args.h, lam.n)
    report = run_verification(
        lam, h, q=args.q, budget_bits=args.budget_bits,
        seed=args.seed, workers=args.workers,
    )
    payload = dict(_header(args, "verify"))
    payload.update(report.to_json())
    fail = report.first_failure()
    lines = [f"{'PASS' if c.ok else 'FAIL'} {c.name}" for c in report.checks]
    if fail is not None:
        lines.append(f"first failure: {fail.name} (witness: {fail.witness})")
    if report.partial:
        lines.append(f"BUDGET EXCEEDED: {report.budget_message}")
    csv_rows = ["check;ok;witness"] + [
        f"{c.name};{int(c.ok)};{c.witness or ''}" for c in report.checks
    ]
    _emit(args, payload, csv_rows, "\n".join(lines))
    if report.partial:
        return EXIT_BUDGET
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_generic_flag(args) -> int:
    lam = _parse_lambda(args.lam)
    h = _parse_h(args.h, lam.n)
    if args.w is None:
        raise InputError("--w is required for generic-flag")
    w = _parse_w(args.w, lam.n)
    from .combinatorics import is_row_strict

    if not is_row_strict(tableau_of(w, lam)):
        raise InputError(f"R(w) is not row-strict for w={w}")
    flag = generic_flag(w, lam)
    zero_keys = hess_zero_coordinates(w, lam, h)
    columns = [
        [entry.subs_zero(zero_keys) for entry in col] for col in flag.columns
    ]
    payload = dict(_header(args, "generic-flag"))
    payload["w"] = list(w.word)
    payload["zeroed"] = sorted([list(k) for k in zero_keys])
    payload["columns"] = [[_poly_str(e) for e in col] for col in columns]
    lines = [f"generic flag for w={w}, lambda={lam}, h={h}"]
    if zero_keys:
        lines.append(
            "zeroed coordinates: "
            + ", ".join(f"x{a}{b}" for a, b in sorted(zero_keys))
        )
    for j, col in enumerate(columns, start=1):
        terms = [
            f"({_poly_str(e)})*e{i}" if not _is_simple(e) else _simple_term(e, i)
            for i, e in enumerate(col, start=1) if e
        ]
        lines.append(f"v{j} = " + (" + ".join(terms) if terms else "0"))
    csv_rows = ["column;entries"] + [
        f"{j};" + "|".join(_poly_str(e) for e in col)
        for j, col in enumerate(columns, start=1)
    ]
    _emit(args, payload, csv_rows, "\n".join(lines))
    return EXIT_OK


def _is_simple(p: Poly) -> bool:
    return len(p.terms) <= 1


def _simple_term(p: Poly, i: int) -> str:
    if p == Poly.const(1):
        return f"e{i}"
    return f"{_poly_str(p)}*e{i}"


def cmd_count(args) -> int:
    lam = _parse_lambda(args.lam)
    h = _parse_h(args.h, lam.n)
    if args.q is None:
        raise InputError("--q is required for count")
    report = variety_point_count(
        lam, h, args.q, budget_bits=args.budget_bits, workers=args.workers
    )
    payload = dict(_header(args, "count"))
    payload.update(report.to_json())
    csv_rows = ["w;count;expected"] + [
        ",".join(str(v) for v in e["w"]) + f";{e['count']};{e['expected']}"
        for e in report.to_json()["per_cell"]
    ]
    text = (
        f"|Hess(F_{args.q})| = {report.total}, predicted {report.predicted}: "
        + ("MATCH" if report.match else "MISMATCH")
    )
    _emit(args, payload, csv_rows, text)
    return EXIT_OK if report.match else EXIT_VERIFY_FAILED


def cmd_profile(args) -> int:
    lam = _parse_lambda(args.lam)
    h = _parse_h(args.h, lam.n)
    if args.w is None:
        raise InputError("--w is required for profile")
    w = _parse_w(args.w, lam.n)
    t = tableau_of(w, lam)
    try:
        prof = inversion_profile(t, lam, h)
    except ValueError as e:
        raise InputError(str(e))
    payload = dict(_header(args, "profile"))
    payload["w"] = list(w.word)
    payload["profile"] = [
        {"i": i, "j": j, "count": c} for (i, j), c in sorted(prof.d.items()) if c
    ]
    payload["total"] = prof.total
    csv_rows = ["i;j;count"] + [
        f"{i};{j};{c}" for (i, j), c in sorted(prof.d.items()) if c
    ]
    lines = [f"inversion profile for w={w}, lambda={lam}, h={h}"]
    for (i, j), c in sorted(prof.d.items()):
        if c:
            lines.append(f"d({i},{j}) = {c}")
    lines.append(f"total = {prof.total}")
    _emit(args, payload, csv_rows, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hesspave",
        description="Affine pavings of type-A Hessenberg varieties with h(i) < i",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "cells": cmd_cells,
        "poincare": cmd_poincare,
        "r0": cmd_r0,
        "verify": cmd_verify,
        "generic-flag": cmd_generic_flag,
        "count": cmd_count,
        "profile": cmd_profile,
    }
    default_workers = int(os.environ.get("HESSPAVE_WORKERS", "1"))
    for name, func in commands.items():
        p = sub.add_parser(name)
        p.add_argument("--lambda", dest="lam", required=True,
                       help="comma-separated row lengths, e.g. 2,2,2")
        p.add_argument("--h", default="springer",
                       help="comma-separated values or the literal 'springer'")
        p.add_argument("--q", type=int, default=None, help="prime field size")
        p.add_argument("--budget-bits", type=int, default=24)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=default_workers)
        p.add_argument("--format", choices=["json", "csv", "text"], default="json")
        p.add_argument("--out", default=None, metavar="FILE")
        if name in ("generic-flag", "profile"):
            p.add_argument("--w", default=None,
                           help="comma-separated one-line notation")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget_bits < 1:
        print("input error: --budget-bits must be >= 1", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        return args.func(args)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except BudgetExceededError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
