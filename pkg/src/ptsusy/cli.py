"""Command-line front end.

    ptsusy figures  [--alpha A] [--epsilon E] [--xmin X --xmax X --step H] [--out DIR]
    ptsusy verify   [--alpha A] [--epsilon E] [--levels N] [--out PATH]
    ptsusy spectrum [--alpha A] [--epsilon E] [--levels N] [--grid XMIN:XMAX:N] [--format csv|json]
    ptsusy scan     (--path START:END:STEPS | --arc R:DEG0:DEG1:STEPS) [--levels N] [--grid ...]

Relative output paths resolve against $PTSUSY_OUTPUT_DIR when it is set.
Exit codes: 0 ok, 1 check failure, 2 usage or configuration error,
3 partial output because of singular samples.
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
from pathlib import Path

import numpy as np

from . import checks, states
from .errors import ContourSingularityError, DegenerateClosureError
from .model import ModelParams, ces_closure, partner_minus, v_plus
from .numeric import GridSpec, alpha_scan, discretize, numerical_energy, sector_operator
from .states import StateLabel

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2, 3
OUTPUT_DIR_ENV = "PTSUSY_OUTPUT_DIR"

# defaults of the reference curves: unbroken and broken sectors
FIGURE_SETS = (("fig1_fig2", 0.3 + 0j), ("fig3_fig4", 0.3j))

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_ALPHA_RE = re.compile(
    rf"^(?:(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?i)?|(?P<imonly>[+-]?(?:{_NUM})?i))$"
)


class UsageError(Exception):
    pass


def parse_alpha(text: str) -> complex:
    """Parse 'RE', 'IMi' or 'RE+IMi' (e.g. '0.3', '0.3i', '-0.1+0.2i', 'i')."""
    m = _ALPHA_RE.match(text.strip().replace(" ", ""))
    if not m:
        raise UsageError(f"cannot parse coupling {text!r}; expected RE, IMi or RE+IMi")

    def imag(tok):
        body = tok[:-1]
        return float(body + "1") if body in ("", "+", "-") else float(body)

    if m.group("imonly") is not None:
        return complex(0.0, imag(m.group("imonly")))
    im = imag(m.group("im")) if m.group("im") else 0.0
    return complex(float(m.group("re")), im)


def parse_grid(text: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be XMIN:XMAX:N, got {text!r}")
    try:
        return GridSpec(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None


def _clean(z: complex) -> complex:
    scale = abs(z)
    re_, im_ = z.real, z.imag
    if abs(re_) < 1e-14 * scale:
        re_ = 0.0
    if abs(im_) < 1e-14 * scale:
        im_ = 0.0
    return complex(re_, im_)


def parse_path(text: str) -> list[complex]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"path must be START:END:STEPS, got {text!r}")
    start, end = parse_alpha(parts[0]), parse_alpha(parts[1])
    steps = _parse_steps(parts[2])
    if steps == 1:
        return [start]
    return [_clean(start + (end - start) * k / (steps - 1)) for k in range(steps)]


def parse_arc(text: str) -> list[complex]:
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"arc must be RADIUS:DEG0:DEG1:STEPS, got {text!r}")
    try:
        r, t0, t1 = (float(p) for p in parts[:3])
    except ValueError:
        raise UsageError(f"bad arc {text!r}") from None
    steps = _parse_steps(parts[3])
    thetas = [t0] if steps == 1 else [t0 + (t1 - t0) * k / (steps - 1) for k in range(steps)]
    return [_clean(r * complex(math.cos(math.radians(t)), math.sin(math.radians(t)))) for t in thetas]


def _parse_steps(tok: str) -> int:
    try:
        steps = int(tok)
    except ValueError:
        raise UsageError(f"step count must be an integer, got {tok!r}") from None
    if steps < 1:
        raise UsageError("path is empty; need at least one step")
    return steps


def fmt(v) -> str:
    if v is None:
        return ""
    v = float(v)
    if not math.isfinite(v):
        return ""
    return format(v + 0.0, ".12g")


def cjson(z) -> dict | None:
    if z is None:
        return None
    z = complex(z)
    return {"re": z.real + 0.0, "im": z.imag + 0.0}


def alpha_label(alpha: complex) -> str:
    alpha = complex(alpha)
    if alpha.imag == 0:
        return fmt(alpha.real)
    if alpha.real == 0:
        return fmt(alpha.imag) + "i"
    return f"{fmt(alpha.real)}{'+' if alpha.imag >= 0 else ''}{fmt(alpha.imag)}i"


def _resolve(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _emit(text: str, out: str | None) -> None:
    p = _resolve(out)
    if p is None:
        sys.stdout.write(text)
        return
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- figures ---------------------------------------------------------------

FIGURE_COLUMNS = (
    "x", "re_vplus", "im_vplus", "re_vminus_qp", "im_vminus_qp", "re_vminus_qm", "im_vminus_qm", "flag",
)


def sample_points(xmin: float, xmax: float, step: float) -> np.ndarray:
    if not step > 0 or not xmin < xmax:
        raise UsageError("need xmin < xmax and step > 0")
    n = int(round((xmax - xmin) / step)) + 1
    return np.linspace(xmin, xmax, n)


def curve_rows(alpha: complex, epsilon: float, xs) -> tuple[list[list[str]], int]:
    """Curve table rows and the number of flagged (singular) rows."""
    for q in (1, -1):
        ces_closure(q, alpha)
    rows, flagged = [], 0
    for x in xs:
        x = float(x)
        try:
            vals = [v_plus(alpha, epsilon, x), partner_minus(alpha, epsilon, 1, x), partner_minus(alpha, epsilon, -1, x)]
            if not all(np.isfinite(complex(v)) for v in vals):
                raise ContourSingularityError("non-finite potential value")
        except ContourSingularityError:
            rows.append([fmt(x)] + [""] * 6 + ["singular"])
            flagged += 1
            continue
        row = [fmt(x)]
        for v in vals:
            row += [fmt(complex(v).real), fmt(complex(v).imag)]
        rows.append(row + [""])
    return rows, flagged


def cmd_figures(args) -> int:
    if args.epsilon <= 0:
        raise UsageError("epsilon must be positive")
    if args.alpha is None:
        sets = FIGURE_SETS
    else:
        sets = ((f"curves_alpha_{alpha_label(args.alpha)}", args.alpha),)
    for _, alpha in sets:
        ces_closure(1, alpha)
        ces_closure(-1, alpha)
    xs = sample_points(args.xmin, args.xmax, args.step)
    outdir = _resolve(args.out) if args.out else Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    outdir.mkdir(parents=True, exist_ok=True)
    partial = False
    for stem, alpha in sets:
        rows, flagged = curve_rows(alpha, args.epsilon, xs)
        partial |= flagged > 0
        path = outdir / f"{stem}.csv"
        path.write_text(_csv_text(FIGURE_COLUMNS, rows), encoding="utf-8")
        print(f"wrote {path} ({len(rows)} rows, {flagged} singular)", file=sys.stderr)
    return EXIT_PARTIAL if partial else EXIT_OK


# -- verify ----------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.epsilon <= 0:
        raise UsageError("epsilon must be positive")
    rep = checks.report(args.alpha, args.epsilon, args.levels)
    _emit(json.dumps(rep, indent=2) + "\n", args.out)
    for c in rep["checks"]:
        if c["status"] == checks.ERROR:
            print(f"error: {c['name']}: {c['detail']}", file=sys.stderr)
    if any(c["status"] == checks.ERROR for c in rep["checks"]):
        return EXIT_USAGE
    return EXIT_OK if rep["passed"] else EXIT_FAILED


# -- spectrum --------------------------------------------------------------

SPECTRUM_COLUMNS = (
    "sector", "q", "n", "re_analytic", "im_analytic", "re_numerical", "im_numerical",
    "abs_diff", "residual", "iterations", "converged", "flag",
)


def spectrum_rows(alpha: complex, epsilon: float, levels: int, grid: GridSpec) -> list[dict]:
    params = {q: ModelParams(alpha, epsilon, q) for q in (1, -1)}
    # v_plus is q-independent, so both quasi-parity ladders share one operator
    plus_op = discretize(lambda x: v_plus(alpha, epsilon, x), grid)
    rows = []
    for sector in states.SECTORS:
        for q in (1, -1):
            p = params[q]
            op = plus_op if sector == "plus" else sector_operator(StateLabel(sector, 0, q), p, grid)
            for n in range(levels):
                lab = StateLabel(sector, n, q)
                est = numerical_energy(lab, p, grid, op=op)
                e = states.energy(lab, alpha)
                rows.append({
                    "sector": sector, "q": q, "n": n,
                    "analytic": e, "numerical": est.value,
                    "abs_diff": abs(est.value - e), "residual": est.residual,
                    "iterations": est.iterations, "converged": est.converged,
                    "flag": "" if est.converged else "not_converged",
                })
    return rows


def cmd_spectrum(args) -> int:
    if args.epsilon <= 0:
        raise UsageError("epsilon must be positive")
    rows = spectrum_rows(args.alpha, args.epsilon, args.levels, args.grid)
    if args.format == "json":
        doc = {
            "alpha": cjson(args.alpha), "epsilon": args.epsilon,
            "grid": {"x_min": args.grid.x_min, "x_max": args.grid.x_max, "n_points": args.grid.n_points},
            "rows": [
                {**r, "analytic": cjson(r["analytic"]), "numerical": cjson(r["numerical"])} for r in rows
            ],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        table = [
            [r["sector"], r["q"], r["n"],
             fmt(r["analytic"].real), fmt(r["analytic"].imag),
             fmt(r["numerical"].real), fmt(r["numerical"].imag),
             fmt(r["abs_diff"]), fmt(r["residual"]), r["iterations"],
             int(r["converged"]), r["flag"]]
            for r in rows
        ]
        _emit(_csv_text(SPECTRUM_COLUMNS, table), args.out)
    return EXIT_OK if all(r["converged"] for r in rows) else EXIT_FAILED


# -- scan ------------------------------------------------------------------

def scan_columns(levels: int) -> list[str]:
    cols = ["alpha_re", "alpha_im"]
    for tag in ("qp", "qm"):
        for n in range(levels):
            cols += [f"re_E{n}_{tag}", f"im_E{n}_{tag}", f"re_Enum{n}_{tag}", f"im_Enum{n}_{tag}"]
    cols += [
        "pt_defect_vplus", "pt_defect_vminus_qp", "pt_defect_vminus_qm",
        "pairing_defect_analytic", "pairing_defect_numerical", "max_residual", "flag",
    ]
    return cols


def scan_table(rows, levels: int) -> list[list[str]]:
    out = []
    for r in rows:
        line = [fmt(r.alpha.real), fmt(r.alpha.imag)]
        for q in (1, -1):
            num = r.numerical.get(q)
            for n in range(levels):
                e = r.analytic[q][n]
                line += [fmt(e.real), fmt(e.imag)]
                line += [fmt(num[n].value.real), fmt(num[n].value.imag)] if num else ["", ""]
        residuals = [e.residual for ests in r.numerical.values() for e in ests]
        line += [
            fmt(r.pt_defect_vplus), fmt(r.pt_defect_vminus.get(1)), fmt(r.pt_defect_vminus.get(-1)),
            fmt(r.pairing_analytic), fmt(r.pairing_numerical),
            fmt(max(residuals)) if residuals else "", ";".join(r.flags),
        ]
        out.append(line)
    return out


def cmd_scan(args) -> int:
    if (args.path is None) == (args.arc is None):
        raise UsageError("give exactly one of --path or --arc")
    if args.epsilon <= 0:
        raise UsageError("epsilon must be positive")
    path = parse_path(args.path) if args.path is not None else parse_arc(args.arc)
    rows = alpha_scan(path, args.epsilon, args.levels, args.grid)
    _emit(_csv_text(scan_columns(args.levels), scan_table(rows, args.levels)), args.out)
    if any(f.startswith(("degenerate", "contour")) for r in rows for f in r.flags):
        return EXIT_PARTIAL
    if any(r.flags for r in rows):
        return EXIT_FAILED
    return EXIT_OK


# -- entry point -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _alpha_arg(text):
    try:
        return parse_alpha(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _grid_arg(text):
    try:
        return parse_grid(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptsusy", description="SUSY partners of the PT-symmetric shifted oscillator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, alpha_default):
        p.add_argument("--alpha", type=_alpha_arg, default=alpha_default, help="coupling, e.g. 0.3, 0.3i, 0.1+0.2i")
        p.add_argument("--epsilon", type=float, default=0.5, help="contour shift (default 0.5)")

    p = sub.add_parser("figures", help="write potential curves (defaults give both reference parameter sets)")
    common(p, None)
    p.add_argument("--xmin", type=float, default=-4.0)
    p.add_argument("--xmax", type=float, default=4.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("verify", help="run the analytic verification suite, JSON report")
    common(p, 0.3 + 0j)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--out", help="report path (default stdout)")
    p.set_defaults(func=cmd_verify)

    for name, func, helptext in (
        ("spectrum", cmd_spectrum, "analytic vs numerical eigenvalues"),
        ("scan", cmd_scan, "spectra and PT diagnostics along a coupling path"),
    ):
        p = sub.add_parser(name, help=helptext)
        common(p, 0.3 + 0j)
        p.add_argument("--levels", type=int, default=3 if name == "spectrum" else 2)
        p.add_argument("--grid", type=_grid_arg, default=GridSpec(-10.0, 10.0, 4001), help="XMIN:XMAX:N")
        p.add_argument("--out", help="output path (default stdout)")
        if name == "spectrum":
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        else:
            p.add_argument("--path", help="straight path START:END:STEPS in alpha")
            p.add_argument("--arc", help="circular path RADIUS:DEG0:DEG1:STEPS")
        p.set_defaults(func=func)
    return parser


_VALUE_OPTIONS = {"--alpha", "--epsilon", "--xmin", "--xmax", "--step", "--grid", "--path", "--arc"}


def _glue_values(argv: list[str]) -> list[str]:
    # keep argparse from reading values such as -10:10:2001 or -0.3i as options
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_glue_values(argv))
        if getattr(args, "levels", 1) < 1:
            raise UsageError("levels must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"ptsusy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateClosureError, ContourSingularityError) as exc:
        print(f"ptsusy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
