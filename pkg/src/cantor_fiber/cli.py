"""Command-line front end: ``cantor-fiber <command> [flags]``.

Exit codes: 0 success, 1 input error, 2 certified negative result,
3 budget or precision exhaustion.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from mpmath import mp

from . import seqcore as sq
from .coding import NOT_MEMBER, phi_t_digits
from .dimension import (DimensionReport, intersection_dims, level_set_dim, local_dim_lambda_set,
                        SigmaPattern, sigma_generate, sigma_lower_bound)
from .fiberset import (DEFAULT_BUDGET, box_count_estimate, box_scales, default_window,
                       gamma_occupancy, gamma_raster, lambda_cover, psi_from_cover)
from .reals import RealScalar, get_precision, parse_fraction, precision
from .solver import solve_lambda

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE, EXIT_EXHAUSTED = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _frac_str(q: Fraction) -> str:
    return RealScalar.from_fraction(q).decimal_str()


def _scalar(text: str | None, name: str) -> RealScalar:
    if text is None:
        raise InputError(f"--{name} is required")
    return RealScalar.from_fraction(parse_fraction(text))


def _window(text: str | None):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"--window expects 'a,b', got {text!r}")
    a, b = (RealScalar.from_fraction(parse_fraction(p)) for p in parts)
    if not a.certainly_lt(b):
        raise InputError("--window needs a < b")
    return a, b


def _grid(text: str):
    try:
        w, h = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise InputError(f"--grid expects WxH, got {text!r}") from None
    if w < 1 or h < 1:
        raise InputError("--grid dimensions must be positive")
    return w, h


def _coding(text: str | None) -> sq.PeriodicCoding:
    if text is None:
        raise InputError("--coding is required")
    return sq.PeriodicCoding.parse(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- commands: each returns (text, exit code) --------------------------------

def cmd_code(a):
    t, lam = _scalar(a.t, "t"), _scalar(a.lam, "lambda")
    res = phi_t_digits(t, lam, a.digits or 32, a.mode)
    code = EXIT_NEGATIVE if res.status == NOT_MEMBER else EXIT_EXHAUSTED if res.exhausted else EXIT_OK
    out = res.to_json()
    out.update(t=t.decimal_str(), **{"lambda": lam.decimal_str()})
    return _json(out), code


def cmd_cover(a):
    t = _scalar(a.t, "t")
    cover = lambda_cover(t, a.depth, _window(a.window), a.budget)
    if a.format == "csv":
        rows = [[iv.lo.decimal_str(), iv.hi.decimal_str()] for iv in cover.intervals()]
        text = _csv(["lambda_lo", "lambda_hi"], rows)
    else:
        text = _json(cover.to_json())
    return text, EXIT_EXHAUSTED if cover.truncated else EXIT_OK


def cmd_psi(a):
    t = _scalar(a.t, "t")
    window = _window(a.window) or default_window(t)
    cover = lambda_cover(t, a.depth, window, a.budget)
    n = a.samples or 101
    if n < 2:
        raise InputError("--samples must be >= 2")
    lo, hi = window
    lams = [lo + (hi - lo) * Fraction(i, n - 1) for i in range(n)]
    samples = psi_from_cover(cover, lams)
    rows = [[lam.decimal_str(), repr(s.psi)] for lam, s in zip(lams, samples)]
    if a.format == "json":
        text = _json({"t": t.decimal_str(), "depth": a.depth, "truncated": cover.truncated,
                      "samples": [{"lambda": r[0], "psi": r[1]} for r in rows]})
    else:
        text = _csv(["lambda", "psi"], rows)
    return text, EXIT_EXHAUSTED if cover.truncated else EXIT_OK


def cmd_gamma(a):
    width, height = _grid(a.grid or "64x64")
    if a.format == "json":
        grid = gamma_occupancy(a.depth, width, height, a.budget)
        rows = ["".join("#" if v else "." for v in row) for row in grid[::-1]]
        return _json({"depth": a.depth, "grid": [width, height], "rows": rows}), EXIT_OK
    lams = [Fraction(i + 1, 3 * width) for i in range(width)]
    bands = gamma_raster(a.depth, lams, budget=a.budget)
    rows = [[repr(b.lam), repr(b.t_lo), repr(b.t_hi), " ".join(str(d) for d in b.word)] for b in bands]
    return _csv(["lambda", "t_lo", "t_hi", "word"], rows), EXIT_OK


def cmd_solve(a):
    c, t = _coding(a.coding), _scalar(a.t, "t")
    roots = solve_lambda(c, t, double_tol=a.tolerance)
    empty = not roots.roots and not roots.identically
    return _json(roots.to_json()), EXIT_NEGATIVE if empty else EXIT_OK


def cmd_dim(a):
    if a.level_set_beta is not None:
        v = level_set_dim(_scalar(a.level_set_beta, "level-set-beta"))
        report = DimensionReport(v, v, "levelset")
    elif a.coding is not None:
        lam = _scalar(a.lam, "lambda")
        ambiguous = lam.exact == Fraction(1, 3)
        report = intersection_dims(_coding(a.coding), lam, ambiguous=ambiguous)
    elif a.q is not None:
        v = sigma_lower_bound(a.q, _scalar(a.lam, "lambda"))
        report = DimensionReport(v, v, "moran", ("lower_bound",))
    elif a.t is not None:
        t = _scalar(a.t, "t")
        window = _window(a.window)
        if window is None:
            raise InputError("box counting needs --window")
        cover = lambda_cover(t, a.depth, window, a.budget)
        bc = box_count_estimate(cover, window, box_scales(window))
        report = DimensionReport(mp.mpf(bc.slope), mp.mpf(bc.slope), "boxcount",
                                 ("truncated",) if cover.truncated else ())
        return _json(report.to_json()), EXIT_EXHAUSTED if cover.truncated else EXIT_OK
    elif a.lam is not None:
        v = local_dim_lambda_set(_scalar(a.lam, "lambda"))
        report = DimensionReport(v, v, "local")
    else:
        raise InputError("dim needs one of --level-set-beta, --coding, --q, --t or --lambda")
    return _json(report.to_json()), EXIT_OK


def cmd_sigma(a):
    q, m = a.q or 1, a.m if a.m is not None else 8
    try:
        word = sigma_generate(SigmaPattern(q, m))
    except ValueError as e:
        raise InputError(str(e)) from None
    ell = {mm: (pos, f) for mm, pos, f in word.ell_checkpoints}
    rows = []
    for mm, pos, f in word.r_checkpoints:
        lpos, lf = ell.get(mm, ("", None))
        rows.append([mm, pos, _frac_str(f), lpos, "" if lf is None else _frac_str(lf)])
    if a.format == "json":
        keys = ["m", "r_m", "freq_r", "ell_m", "freq_ell"]
        return _json({"q": q, "m_max": m, "checkpoints": [dict(zip(keys, r)) for r in rows]}), EXIT_OK
    return _csv(["m", "r_m", "freq_r", "ell_m", "freq_ell"], rows), EXIT_OK


def cmd_verify(a):
    from .verify import CHECKS, run_all

    numbers = None
    if a.only:
        try:
            numbers = sorted({int(x) for x in a.only.split(",")})
        except ValueError:
            raise InputError(f"--only expects check numbers, got {a.only!r}") from None
        missing = [n for n in numbers if n not in CHECKS]
        if missing:
            raise InputError(f"unknown checks {missing}")
    results = run_all(numbers)
    text = "".join(r.line() + "\n" for r in results)
    failed = sum(not r.passed for r in results)
    text += f"{len(results) - failed}/{len(results)} passed\n"
    return text, EXIT_NEGATIVE if failed else EXIT_OK


COMMANDS = {
    "code": (cmd_code, "digits of t in base lambda"),
    "cover": (cmd_cover, "certified cover of the fiber set of t"),
    "psi": (cmd_psi, "dimension-distribution function on a lambda grid (CSV lambda,psi)"),
    "gamma": (cmd_gamma, "bands of the master set (CSV lambda,t_lo,t_hi,word)"),
    "solve": (cmd_solve, "all lambda with Pi(c, lambda) = t"),
    "dim": (cmd_dim, "closed-form or box-counting dimensions"),
    "sigma": (cmd_sigma, "zero-frequency checkpoints of the oscillating pattern"),
    "verify": (cmd_verify, "run the acceptance checks"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--t")
    common.add_argument("--lambda", dest="lam")
    common.add_argument("--coding")
    common.add_argument("--digits", type=int)
    common.add_argument("--depth", type=int, default=12)
    common.add_argument("--window")
    common.add_argument("--samples", type=int)
    common.add_argument("--grid")
    common.add_argument("--q", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--mode", choices=("auto", "greedy", "lazy"), default="auto")
    common.add_argument("--precision", type=int, help="working precision in bits (>= 53)")
    common.add_argument("--tolerance", type=float, default=None,
                        help="merge two roots into a double root when the extremum is this close to t")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--level-set-beta", dest="level_set_beta")
    common.add_argument("--only", help="comma-separated check numbers (verify)")

    parser = argparse.ArgumentParser(prog="cantor-fiber", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def _error(message: str, kind: str) -> int:
    sys.stderr.write(json.dumps({"error": message, "type": kind}, sort_keys=True) + "\n")
    return EXIT_INPUT


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed usage; keep the exit-code contract
        return EXIT_OK if e.code == 0 else _error("invalid command line", "usage")
    try:
        if args.depth < 0:
            raise InputError("--depth must be >= 0")
        if args.tolerance is not None and args.tolerance <= 0:
            raise InputError("--tolerance must be > 0")
        fn, _ = COMMANDS[args.command]
        with precision(args.precision or get_precision()):
            text, code = fn(args)
    except (InputError, ValueError, ZeroDivisionError) as e:
        return _error(str(e), type(e).__name__)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
