"""``csiszar`` command line: divergences, convexity classification, verification suites.

Exit codes: 0 success (or the expected result), 1 usage/parse/input error,
2 domain error. Every report starts with a reproducibility header.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import sys
from pathlib import Path

import numpy as np

from csiszar import __version__
from csiszar import convexity_lab as lab
from csiszar import divergence as dv
from csiszar import expr_parser
from csiszar import matrix_jensen as mj
from csiszar import perspective_inequalities as pi
from csiszar._checks import DEFAULT_TOL
from csiszar.core_functions import CATALOG_NAMES, catalog_lookup
from csiszar.errors import CsiszarError, DomainError, ParseError
from csiszar.reporting import dumps, flatten, fmt, to_csv, to_jsonable

SUITES = ("thm23", "thm24", "prop31", "thm32", "subadditivity", "counterexample", "all")
FLAG_LABELS = {dv.ZERO_OVER_ZERO: "0/0", dv.P_OVER_ZERO: "p/0", dv.F_AT_ZERO: "f(0+)"}
PROP31_SUITES = tuple(s for s in mj.MATRIX_SUITES)
THM32_SUITES = tuple(s for s in mj.TWO_VARIABLE_SUITES)


class UsageError(Exception):
    """Bad command line or malformed input; exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------- input helpers

def _real(text):
    t = text.strip().lower()
    if t in ("inf", "+inf"):
        return math.inf
    if t == "-inf":
        return -math.inf
    return float(t)


def _interval(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    try:
        return _real(lo), _real(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None


def _read_numbers_file(path, field):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{field}: cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        rows = [r for r in csv.reader(text.splitlines()) if r and r[0].strip()]
        if any(len(r) != 1 for r in rows):
            raise UsageError(f"{field}: {path} is neither a JSON array nor a single-column CSV") from None
        data = [r[0] for r in rows]
    if not isinstance(data, list):
        raise UsageError(f"{field}: {path} must hold a JSON array")
    return data


def _numbers(value, field):
    """Comma list, ``@file``, or an already-parsed list -> float array."""
    if isinstance(value, str):
        items = _read_numbers_file(value[1:], field) if value.startswith("@") else value.split(",")
    else:
        items = value
    try:
        return np.array([_real(v) if isinstance(v, str) else float(v) for v in items], dtype=np.float64)
    except (TypeError, ValueError):
        raise UsageError(f"{field}: expected a list of numbers") from None


def _load_input(path):
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"--input: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"--input: invalid JSON in {path}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError("--input: expected a JSON object")
    return data


def _field(args, data, name, flag=None):
    """A field from the input file or from its flag; both at once is an error."""
    flag = flag or name
    inline = getattr(args, flag, None)
    if name in data and inline is not None:
        raise UsageError(f"{name} given both in --input and as --{flag}")
    if name in data:
        return data[name]
    return inline


def _matrix(value, field):
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError:
            raise UsageError(f"{field}: expected a JSON array of arrays") from None
    try:
        m = np.array(value, dtype=np.float64)
    except (TypeError, ValueError):
        raise UsageError(f"{field}: expected a JSON array of arrays") from None
    if m.ndim != 2:
        raise UsageError(f"{field}: expected a square matrix")
    return m


def _core(args):
    if args.f is not None and args.name is not None:
        raise UsageError("give either --name or --f, not both")
    if args.f is not None:
        domain = args.domain or (0.0, math.inf)
        return expr_parser.compile(args.f, domain, args.limit_zero, args.slope_inf)
    if args.name is None:
        raise UsageError("a core function is required: --name NAME or --f EXPR")
    if args.name not in CATALOG_NAMES:
        raise UsageError(f"--name: unknown core {args.name!r}; known: {', '.join(CATALOG_NAMES)}")
    return catalog_lookup(args.name, args.param)


# ---------------------------------------------------------------- report output

def _header(args, command, seed=None, trials=None, tolerance=None):
    return {
        "tool": "csiszar",
        "version": __version__,
        "command": command,
        "seed": seed,
        "trials": trials,
        "tolerance": tolerance,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _emit(report, fmt_name, text_lines, out):
    if fmt_name == "json":
        out.write(dumps(report) + "\n")
    elif fmt_name == "csv":
        out.write(to_csv(report))
    else:
        head = report["header"]
        out.write(f"# {head['tool']} {head['version']} {head['command']}"
                  f" seed={head['seed']} trials={head['trials']} tolerance={head['tolerance']}"
                  f" timestamp={head['timestamp']}\n")
        for line in text_lines:
            out.write(line + "\n")


def _flatten_text(obj):
    return [f"{path}: {fmt(v) if isinstance(v, float) else v}" for path, v in flatten(to_jsonable(obj))]


# ---------------------------------------------------------------- commands

def cmd_divergence(args, out):
    data = _load_input(args.input)
    p = _field(args, data, "p")
    q = _field(args, data, "q")
    if p is None or q is None:
        raise UsageError("div needs p and q (--p/--q or --input)")
    p, q = _numbers(p, "p"), _numbers(q, "q")
    if args.name in ("renyi_rho", "renyi_R") or (args.name in dv.NAMED and args.f is None and args.param is None):
        value = dv.named(args.name, p, q, args.alpha)
        label = args.name
    else:
        f = _core(args)
        value = dv.csiszar_divergence(f, p, q)
        label = f.name
    flags = sorted(FLAG_LABELS[f] for f in value.flags)
    report = {"header": _header(args, "div"),
              "result": {"divergence": label, "value": value.value, "flags": sorted(value.flags)}}
    suffix = f" (convention: {', '.join(flags)})" if flags else ""
    _emit(report, args.format, [f"{label} = {fmt(value.value)}{suffix}"], out)
    return 0


def cmd_classify(args, out):
    f = _core(args)
    interval = args.interval
    if interval is None:
        if not all(math.isfinite(v) for v in f.domain):
            raise UsageError("--interval lo:hi is required for cores with an unbounded domain")
        interval = f.domain
    reports = lab.classify(f, interval, args.trials, args.seed, args.tolerance, args.jobs)
    result = {"core": f.name, "interval": list(interval), "proof": False,
              "verdicts": {str(p): r.to_dict() for p, r in reports.items()}}
    if f.estimated:
        result["estimated_limits"] = sorted(f.estimated)
    report = {"header": _header(args, "classify", args.seed, args.trials, args.tolerance), "result": result}
    lines = [f"core {f.name} on ({fmt(interval[0])}, {fmt(interval[1])}); sampled, not a proof"]
    for pair, r in reports.items():
        line = f"{pair}: {r.verdict.value}"
        if r.witness is not None:
            w = r.witness
            line += (f"  witness x={fmt(w.x)} y={fmt(w.y)} alpha={fmt(w.alpha)}"
                     f" lhs={fmt(w.lhs)} rhs={fmt(w.rhs)}")
        elif r.note:
            line += f"  ({r.note})"
        lines.append(line)
    _emit(report, args.format, lines, out)
    return 0


def _counterexample():
    c = pi.paper_counterexample()
    ok = (c.violated and abs(c.lhs - c.lhs_closed_form) <= 1e-12 * c.lhs_closed_form
          and abs(c.rhs - c.rhs_closed_form) <= 1e-12 * c.rhs_closed_form)
    lines = [f"counterexample: g(a, A(x,y)) = {fmt(c.lhs)} (3 sqrt 3),"
             f" H(g(a,x), g(a,y)) = {fmt(c.rhs)} (16 sqrt 2 / (4 + sqrt 2)):"
             f" {'PASS' if ok else 'FAIL'}"]
    return {"counterexample": c.to_dict(), "reproduced": ok}, lines, 0 if ok else 1


def _suite_lines(report):
    lines = []
    for e in report.entries:
        status = "confirmed" if e.confirmed else f"hypothesis {e.hypothesis_verdict}"
        lines.append(f"{e.suite}({e.part}) {e.core} [{e.hypothesis}, {status}]: "
                     f"{e.violations} violations / {e.trials}" + (f"  ({e.note})" if e.note else ""))
    return lines


def cmd_verify(args, out):
    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {args.trials}")
    suites = ("counterexample", "subadditivity", "thm23", "thm24", "prop31", "thm32") if args.suite == "all" else (args.suite,)
    result, lines, violations, failed = {}, [], 0, False
    for suite in suites:
        if suite == "counterexample":
            payload, more, code = _counterexample()
            failed |= code != 0
        elif suite == "subadditivity":
            res = dv.subadditivity_suite(trials=args.trials, seed=args.seed, tol=args.tolerance, jobs=args.jobs)
            payload = [vars(r) | {"violations": r.violations} for r in res]
            more = [f"subadditivity {r.core}: {r.subadditivity_violations} subadditivity,"
                    f" {r.joint_convexity_violations} joint convexity violations / {r.trials}" for r in res]
            violations += sum(r.violations for r in res)
        elif suite in ("thm23", "thm24"):
            kw = {"pairings24": ()} if suite == "thm23" else {"pairings23": ()}
            res = pi.randomized_suite_thm23_24(args.trials, args.seed, tol=args.tolerance, jobs=args.jobs, **kw)
            payload, more = res.to_dict(), _suite_lines(res)
            violations += res.violations
        else:
            names = PROP31_SUITES if suite == "prop31" else THM32_SUITES
            res = mj.randomized_matrix_suite(args.trials, args.seed, names, tol=args.tolerance, jobs=args.jobs)
            payload = res.to_dict()
            more = [f"{e.suite} {e.subject}: {e.violations} violations, {e.invariant_failures}"
                    f" invariant failures / {e.trials}" for e in res.entries]
            violations += res.violations + res.invariant_failures
        result[suite] = payload
        lines.extend(more)
    result["violations"] = violations
    lines.append(f"total violations: {violations}")
    report = {"header": _header(args, f"verify {args.suite}", args.seed, args.trials, args.tolerance),
              "result": result}
    _emit(report, args.format, lines, out)
    return 0 if violations == 0 and not failed else 1


def _two_variable_h(args):
    if args.h == "product":
        return lambda t, s: t * s
    name, _, r = args.h.partition(":")
    if name not in CATALOG_NAMES:
        raise UsageError(f"--h: expected 'product' or a catalog core name, got {args.h!r}")
    return dv.Perspective(catalog_lookup(name, float(r) if r else None))


def cmd_matrix(args, out):
    data = _load_input(args.input)
    a = _field(args, data, "A")
    if a is None:
        raise UsageError("matrix needs A (--A or --input)")
    a = _matrix(a, "A")
    op = args.op
    lines = []
    if op == "eig":
        sf = mj.eigendecompose(a)
        result = {"eigenvalues": sf.eigenvalues, "eigenvectors": sf.vectors, "sweeps": sf.sweeps,
                  "residual": sf.residual}
        lines = [f"eigenvalues: {' '.join(fmt(v) for v in sf.eigenvalues)}"]
    elif op == "func":
        fa = mj.matrix_function(_core(args), a)
        result = {"f(A)": fa}
        lines = [" ".join(fmt(v) for v in row) for row in fa]
    else:
        eta = _field(args, data, "eta")
        if eta is None:
            raise UsageError(f"matrix {op} needs eta (--eta or --input)")
        eta = _numbers(eta, "eta")
        if op == "jensen":
            res = mj.jensen_scalar_form(_core(args), args.variant, a, eta, args.tolerance)
            result = res._asdict()
        else:
            b, zeta = _field(args, data, "B"), _field(args, data, "zeta")
            if b is None or zeta is None:
                raise UsageError(f"matrix {op} needs B and zeta")
            b, zeta = _matrix(b, "B"), _numbers(zeta, "zeta")
            if op == "remark":
                res = mj.remark_scalar_product_case(args.r, a, b, eta, zeta, args.tolerance)
            else:
                res = mj.jensen_two_variable(_two_variable_h(args), args.hypothesis, a, b, eta, zeta,
                                             args.tolerance)
            result = res.to_dict() if hasattr(res, "to_dict") else res._asdict()
        lines = _flatten_text(result)
    report = {"header": _header(args, f"matrix {op}", tolerance=args.tolerance), "result": result}
    _emit(report, args.format, lines, out)
    return 0


# ---------------------------------------------------------------- parser

def _add_core_flags(p):
    p.add_argument("--name", help="catalog core (%s)" % ", ".join(CATALOG_NAMES))
    p.add_argument("--param", type=float, help="parameter r for power_r / exp_power")
    p.add_argument("--f", help="core function expression in t, e.g. 't*ln(t)'")
    p.add_argument("--domain", type=_interval, help="domain lo:hi for --f (default 0:inf)")
    p.add_argument("--limit-zero", type=_real, help="f(0+) for --f (estimated if omitted)")
    p.add_argument("--slope-inf", type=_real, help="lim f(t)/t at infinity for --f (estimated if omitted)")


def _add_common(p, trials=10_000):
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    p.add_argument("--jobs", type=int, default=1)


def build_parser():
    parser = _Parser(prog="csiszar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"csiszar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("div", help="compute an f-divergence")
    _add_core_flags(d)
    d.add_argument("--alpha", type=float, help="order for renyi_rho / renyi_R")
    d.add_argument("--p", help="comma list or @file")
    d.add_argument("--q", help="comma list or @file")
    d.add_argument("--input", help='JSON file {"p": [...], "q": [...]}')
    d.add_argument("--format", choices=("json", "csv", "text"), default="text")
    d.set_defaults(handler=cmd_divergence)

    c = sub.add_parser("classify", help="sampled MN-convexity verdicts for all nine mean pairs")
    _add_core_flags(c)
    c.add_argument("--interval", type=_interval, help="sampling interval lo:hi")
    _add_common(c)
    c.set_defaults(handler=cmd_classify)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    _add_common(v, trials=1000)
    v.set_defaults(handler=cmd_verify)

    m = sub.add_parser("matrix", help="spectral matrix functions and matrix Jensen checks")
    m.add_argument("op", choices=("eig", "func", "jensen", "two-var", "remark"))
    _add_core_flags(m)
    m.add_argument("--input", help='JSON file {"A": [[...]], "eta": [...], "B": ..., "zeta": ...}')
    m.add_argument("--A", dest="A", help="matrix as JSON")
    m.add_argument("--B", dest="B", help="matrix as JSON")
    m.add_argument("--eta", help="comma list or @file")
    m.add_argument("--zeta", help="comma list or @file")
    m.add_argument("--variant", default="AA", choices=mj.VARIANTS)
    m.add_argument("--hypothesis", default="separately_convex", choices=mj.TWO_VARIABLE_HYPOTHESES)
    m.add_argument("--h", default="product", help="'product' (t*s) or a catalog core whose perspective is used")
    m.add_argument("--r", type=float, default=0.5, help="exponent for the product remark")
    m.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    m.add_argument("--format", choices=("json", "csv", "text"), default="text")
    m.set_defaults(handler=cmd_matrix)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args, out)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except ParseError as exc:
        err.write(f"parse error:\n{exc.render()}\n")
        return 1
    except KeyError as exc:
        err.write(f"error: {exc.args[0]}\n")
        return 1
    except DomainError as exc:
        err.write(f"domain error: {exc}\n")
        return 2
    except (CsiszarError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
