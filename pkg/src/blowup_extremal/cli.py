"""Command-line entry point: ``blowup-extremal <command> [flags]``.

Exit codes: 0 success, 1 a certificate or verification failed, 2 usage
error, 3 the extremal constants could not be constructed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import regularity, stability
from .errors import DomainError, NumericError, VanishingDenominatorError
from .extremal import build_profile, scalar_target
from .toric import (
    PotentialModel,
    abreu_scalar_fd,
    det_closed,
    hessian_s,
    interior_grid,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONSTRUCTION = 0, 1, 2, 3
SCHEMA = 1

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class UsageError(Exception):
    pass


def fmt_float(v: float) -> str:
    return format(float(v), ".17g")


def parse_rational(text: str, what: str = "eps") -> Fraction:
    if not _RATIONAL.match(text):
        raise UsageError(f"{what} must be a rational 'p/q', got {text!r}")
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError:
        raise UsageError(f"{what} has a zero denominator: {text!r}") from None


def parse_eps_lenient(text: str) -> tuple[Fraction, Optional[str]]:
    """Rational or decimal eps; decimals come back with a warning message."""
    if _RATIONAL.match(text):
        return parse_rational(text), None
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"eps must be 'p/q' or a decimal, got {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"eps must be finite, got {text!r}")
    exact = Fraction(text.strip())
    return exact, f"eps given as float {text!r}; converted to the exact decimal value {exact}"


def parse_n_list(text: str) -> list[int]:
    """'3', '3,5,7' or '3..8'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\.\.(\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise UsageError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part.isdigit():
            out.append(int(part))
        else:
            raise UsageError(f"--n expects integers like 3, 3,5 or 3..8; got {text!r}")
    for n in out:
        if n < 3:
            raise UsageError(f"n must be at least 3, got {n}")
    return out


def _single_n(args) -> int:
    ns = parse_n_list(args.n)
    if len(ns) != 1:
        raise UsageError(f"{args.command} takes a single --n")
    return ns[0]


def _eps_open(text: str) -> Fraction:
    e = parse_rational(text)
    if not 0 < e < 1:
        raise UsageError(f"eps must lie in (0, 1), got {e}")
    return e


def _eps_halfopen(text: str) -> Fraction:
    e = parse_rational(text)
    if not 0 <= e < 1:
        raise UsageError(f"eps must lie in [0, 1), got {e}")
    return e


def _positive(value, name):
    if value is None:
        return None
    if value <= 0:
        raise UsageError(f"--{name} must be positive, got {value}")
    return value


# output

def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def dump_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: Optional[str], stdout) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)


# commands

def cmd_slope(args, stdout) -> int:
    n = _single_n(args)
    if args.eps is not None and args.eps_grid is not None:
        raise UsageError("give --eps or --eps-grid, not both")
    if args.eps is not None:
        grid = [_eps_open(args.eps)]
    else:
        k = args.eps_grid if args.eps_grid is not None else 10
        if k < 2:
            raise UsageError("--eps-grid must be at least 2")
        grid = [Fraction(j, k) for j in range(1, k)]
    reports = [stability.slope_report(n, e) for e in grid]
    fields = ("mu", "mu_seshadri", "margin", "seshadri")
    if args.format == "json":
        rows = []
        for r in reports:
            row = {"n": r.n, "eps": str(r.eps)}
            for f in fields:
                row[f] = str(getattr(r, f))
                row[f + "_float"] = fmt_float(getattr(r, f))
            row["unstable"] = r.unstable
            rows.append(row)
        text = dump_json({"schema": SCHEMA, "command": "slope", "rows": rows})
    else:
        header = ["n", "eps", "eps_float"]
        for f in fields:
            header += [f, f + "_float"]
        body = []
        for r in reports:
            row = [r.n, str(r.eps), fmt_float(r.eps)]
            for f in fields:
                row += [str(getattr(r, f)), fmt_float(getattr(r, f))]
            body.append(row)
        text = dump_csv(header, body)
    _emit(text, args.out, stdout)
    return EXIT_OK if all(r.unstable for r in reports) else EXIT_FAIL


def cmd_instability_certify(args, stdout, certifier: Callable) -> int:
    ns = parse_n_list(args.n)
    certs = []
    for n in ns:
        c = certifier(n)
        certs.append({
            "n": n,
            "valid": c.valid,
            "sign": c.sign.as_dict(),
            "factored_form_checked": c.factored_form_checked,
            "degree": c.margin_numerator.degree,
            "margin_numerator": c.margin_numerator.to_strings(),
        })
    ok = all(c["valid"] for c in certs)
    _emit(dump_json({"schema": SCHEMA, "command": "instability-certify", "all_valid": ok, "certificates": certs}),
          args.out, stdout)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_extremal(args, stdout) -> int:
    n = _single_n(args)
    eps = _eps_halfopen(_require(args.eps, "--eps"))
    p = build_profile(n, eps)
    c = p.constants
    obj = {
        "schema": SCHEMA,
        "command": "extremal",
        "n": n,
        "eps": str(eps),
        "constants": {k: str(getattr(c, k)) for k in ("alpha", "beta", "gamma", "delta")},
        "constants_float": {k: fmt_float(getattr(c, k)) for k in ("alpha", "beta", "gamma", "delta")},
        "P": p.P.to_strings(),
        "Q": p.Q.to_strings(),
        "hpp_numerator": p.hpp.num.to_strings(),
        "hpp_denominator": p.hpp.den.to_strings(),
        "A_numerator": p.A.num.to_strings(),
        "A_denominator": p.A.den.to_strings(),
        "residue_at_eps": str(p.residue_at_eps()),
    }
    _emit(dump_json(obj), args.out, stdout)
    return EXIT_OK


def cmd_verify(args, stdout) -> int:
    n = _single_n(args)
    eps = _eps_halfopen(_require(args.eps, "--eps"))
    grid = args.grid if args.grid is not None else 4
    if grid < 2:
        raise UsageError("--grid must be at least 2")
    rep = regularity.verify_regularity(n, eps, grid)
    _emit(dump_json({"schema": SCHEMA, "command": "verify", **rep.as_dict()}), args.out, stdout)
    return EXIT_OK if rep.overall else EXIT_FAIL


EPS_CSV_HEADER = ("phase", "eps", "eps_float", "status", "first_failure")


def _outcome_rows(bracket):
    rows = []
    for phase, items in (("scan", bracket.scan), ("bisect", bracket.bisection)):
        for o in items:
            r = o.row()
            rows.append([phase, r["eps"], r["eps_float"], r["status"], r["first_failure"]])
    return rows


def cmd_epsilon0(args, stdout) -> int:
    n = _single_n(args)
    res = parse_rational(_require(args.resolution, "--resolution"), "resolution")
    if not 0 < res <= Fraction(1, 10):
        raise UsageError(f"--resolution must lie in (0, 1/10], got {res}")
    refine = args.refine if args.refine is not None else 20
    if refine < 0:
        raise UsageError("--refine must be non-negative")
    grid = args.grid if args.grid is not None else 3
    if grid < 2:
        raise UsageError("--grid must be at least 2")
    b = regularity.epsilon0_search(n, res, refine, jobs=args.jobs, sample_grid=grid)
    csv_text = dump_csv(EPS_CSV_HEADER, _outcome_rows(b))
    if args.format == "csv":
        _emit(csv_text, args.out, stdout)
    else:
        _emit(dump_json({"schema": SCHEMA, "command": "epsilon0", **b.as_dict()}), args.out, stdout)
        if args.out:
            _emit(csv_text, str(Path(args.out).with_suffix(".csv")), stdout)
    return EXIT_OK


def sample_header(n: int) -> list[str]:
    return [f"x{i}" for i in range(1, n + 1)] + [
        "rho", "hpp", "S_fd", "S_target", "min_eig", "det_closed", "det_numeric",
    ]


def cmd_sample(args, stdout, stderr) -> int:
    n = _single_n(args)
    eps, warning = parse_eps_lenient(_require(args.eps, "--eps"))
    if not 0 <= eps < 1:
        raise UsageError(f"eps must lie in [0, 1), got {eps}")
    if warning:
        stderr.write(f"warning: {warning}\n")
    grid = args.grid if args.grid is not None else 5
    if grid < 2:
        raise UsageError("--grid must be at least 2")
    step = args.step if args.step is not None else 1e-4
    tol = args.tol if args.tol is not None else 1e-4
    margin = args.margin if args.margin is not None else 0.05
    if not 0 < margin < 0.5:
        raise UsageError("--margin must lie in (0, 1/2)")

    model = PotentialModel.extremal(n, eps)
    profile = model.profile
    rows, ok = [], True
    for x in interior_grid(n, eps, grid, margin=margin):
        rho = float(x[:-1].sum())
        H = hessian_s(model, x)
        s_fd = abreu_scalar_fd(model, x, step=step)
        target = float(scalar_target(profile, Fraction(rho)))
        lam = float(np.linalg.eigvalsh(H).min())
        ok &= abs(s_fd - target) <= tol and lam > 0
        rows.append([fmt_float(v) for v in x] + [
            fmt_float(rho), fmt_float(model.hpp(rho)), fmt_float(s_fd), fmt_float(target),
            fmt_float(lam), fmt_float(det_closed(model, x)), fmt_float(np.linalg.det(H)),
        ])
    header = sample_header(n)
    if args.format == "json":
        obj = {"schema": SCHEMA, "command": "sample", "n": n, "eps": str(eps), "warning": warning,
               "columns": header, "rows": rows}
        text = dump_json(obj)
    else:
        text = dump_csv(header, rows)
    _emit(text, args.out, stdout)
    return EXIT_OK if ok else EXIT_FAIL


def _require(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", required=True, help="dimension; a list such as 3,4 or 3..8 for instability-certify")
    common.add_argument("--out", help="write to PATH instead of stdout")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")

    p = argparse.ArgumentParser(prog="blowup-extremal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("slope", parents=[common], help="slope and quotient slope over an eps grid")
    s.add_argument("--eps")
    s.add_argument("--eps-grid", type=int, help="use eps = j/k for j = 1..k-1 (default 10)")

    sub.add_parser("instability-certify", parents=[common], help="Sturm certificate of slope instability")

    e = sub.add_parser("extremal", parents=[common], help="exact constants and profile polynomials")
    e.add_argument("--eps")

    v = sub.add_parser("verify", parents=[common], help="regularity checks at one eps")
    v.add_argument("--eps")
    v.add_argument("--grid", type=int, help="sample points per axis (default 4)")

    z = sub.add_parser("epsilon0", parents=[common], help="scan and bisect eps for regularity")
    z.add_argument("--resolution", help="grid spacing p/q, at most 1/10")
    z.add_argument("--refine", type=int, help="bisection steps (default 20)")
    z.add_argument("--grid", type=int, help="sample points per axis per eps (default 3)")

    m = sub.add_parser("sample", parents=[common], help="pointwise curvature and Hessian table")
    m.add_argument("--eps", help="p/q, or a decimal (converted with a warning)")
    m.add_argument("--grid", type=int, help="points per axis (default 5)")
    m.add_argument("--step", type=float, help="finite-difference step (default 1e-4)")
    m.add_argument("--tol", type=float, help="allowed |S_fd - S_target| (default 1e-4)")
    m.add_argument("--margin", type=float, help="grid margin in parameter space (default 0.05)")
    return p


_DEFAULT_FORMAT = {"slope": "csv", "sample": "csv", "epsilon0": "json"}


def main(argv: Optional[Sequence[str]] = None, *, certifier: Optional[Callable] = None,
         stdout=None, stderr=None) -> int:
    """Run the CLI and return its exit code.

    ``certifier`` replaces the instability certifier (a test hook).
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.format is None:
        args.format = _DEFAULT_FORMAT.get(args.command, "json")
    elif args.format == "csv" and args.command in ("instability-certify", "extremal", "verify"):
        stderr.write(f"error: {args.command} writes JSON only\n")
        return EXIT_USAGE
    try:
        for name in ("step", "tol", "jobs"):
            _positive(getattr(args, name, None), name)
        if args.command == "slope":
            return cmd_slope(args, stdout)
        if args.command == "instability-certify":
            return cmd_instability_certify(args, stdout, certifier or stability.certify_slope_instability)
        if args.command == "extremal":
            return cmd_extremal(args, stdout)
        if args.command == "verify":
            return cmd_verify(args, stdout)
        if args.command == "epsilon0":
            return cmd_epsilon0(args, stdout)
        return cmd_sample(args, stdout, stderr)
    except (UsageError, DomainError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except VanishingDenominatorError as exc:
        stderr.write(f"error: {exc}\n")
        _emit(dump_json({
            "schema": SCHEMA,
            "command": args.command,
            "error": "VanishingDenominator",
            "which": exc.which,
            "n": exc.n,
            "eps": str(exc.eps),
        }), args.out, stdout)
        return EXIT_CONSTRUCTION
    except NumericError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
