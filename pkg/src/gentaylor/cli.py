"""``gts`` command-line front end.

Exit codes: 0 success, 2 syntax/parse error, 3 numeric failure,
4 domain violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import expr as ex
from .errors import DomainError, GTSError, InexactError, ParseError, PoleError
from .interp import (
    Osculant,
    c_witness,
    hermite_data_from_expr,
    osculate_vandermonde,
    remainder_quotient,
    taylor_value_with_bound,
)
from .jet import derivative_at, derivative_range, evaluate
from .modulus import NodeSet, build_modulus, format_nodes, parse_nodes, verify_rolle_numeric, zero_count_table
from .ratapprox import max_product_derivative, rational_eval, rational_fit, rational_remainder_bound
from .scalar import EXACT, FLOAT, Domain, format_scalar

CONDITIONING_LIMIT = 20


@dataclass
class RunConfig:
    subcommand: str
    function: str | None = None
    nodes: str = ""
    domain: str | None = None
    evals: list = field(default_factory=list)
    grid: int | None = None
    deg_num: int | None = None
    deg_den: int | None = None
    backend: str = "float"
    witness: str | None = None
    csv: str | None = None
    json_out: str | None = None
    format: str = "text"

    def __post_init__(self):
        if self.grid is not None and self.grid < 2:
            raise ParseError(f"--grid must be at least 2, got {self.grid}")


class _Run:
    """Holds the parsed inputs and collects output for one invocation."""

    def __init__(self, cfg: RunConfig, err):
        self.cfg = cfg
        self.err = err
        self.domain = EXACT if cfg.backend == "exact" else FLOAT
        self.lines: list[str] = []
        self.result: dict = {"config": asdict(cfg), "coefficients": {}, "table": [], "diagnostics": {}}
        self.table_header: list[str] | None = None
        self.table_in_text = True

    def warn(self, msg: str) -> None:
        print(f"warning: {msg}", file=self.err)

    def fall_back_to_float(self, exc: Exception) -> None:
        self.warn(f"{exc}; switching to the float backend")
        self.domain = FLOAT

    def parse_function(self):
        if self.cfg.function is None:
            raise ParseError("--f is required")
        return ex.parse(self.cfg.function)

    def nodeset(self) -> NodeSet:
        try:
            return parse_nodes(self.cfg.nodes, self.domain)
        except ParseError:
            if self.domain is EXACT:
                ns = parse_nodes(self.cfg.nodes, FLOAT)
                self.warn("node list is not rational; switching to the float backend")
                self.domain = FLOAT
                return ns
            raise

    def interval(self, ns: NodeSet):
        """``--domain a:b`` attached to ``ns``; defaults to the node span."""
        if self.cfg.domain is None:
            lo, hi = ns.xs[0], ns.xs[-1]
            if not lo < hi:
                raise DomainError("a single node spans no interval; pass --domain a:b")
            self.warn(f"--domain not given, using [{format_scalar(lo)}, {format_scalar(hi)}]; "
                      "bounds depend on this interval")
            return ns.with_interval((lo, hi))
        head, sep, tail = self.cfg.domain.partition(":")
        if not sep:
            raise ParseError(f"--domain must look like a:b, got {self.cfg.domain!r}")
        a = ex.constant_value(head, ns.domain)
        b = ex.constant_value(tail, ns.domain)
        return ns.with_interval((a, b))

    def point(self, text: str, ns: NodeSet):
        x = ex.constant_value(text, ns.domain)
        a, b = ns.interval
        if not a <= x <= b:
            raise DomainError(f"point {text} lies outside [{format_scalar(a)}, {format_scalar(b)}]")
        return x

    def set_table(self, header: list[str], rows: list[list[str]]) -> None:
        self.table_header = header
        self.result["table"] = [dict(zip(header, r)) for r in rows]
        self.table_rows = rows

    def table_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.table_header)
        w.writerows(self.table_rows)
        return buf.getvalue()

    def finish(self, out) -> None:
        if self.table_header is not None and self.cfg.csv:
            with open(self.cfg.csv, "w", encoding="utf-8", newline="") as fh:
                fh.write(self.table_csv())
        if self.cfg.json_out:
            with open(self.cfg.json_out, "w", encoding="utf-8") as fh:
                json.dump(self.result, fh, indent=2)
                fh.write("\n")
        if self.cfg.format == "json":
            out.write(json.dumps(self.result, indent=2) + "\n")
        elif self.cfg.format == "csv":
            if self.table_header is not None:
                out.write(self.table_csv())
        else:
            for line in self.lines:
                out.write(line + "\n")
            if self.table_header is not None and self.table_in_text and not self.cfg.csv:
                out.write(self.table_csv())


def _fmt_list(values) -> str:
    return "[" + ", ".join(values) + "]"


def _f(x) -> str:
    return format_scalar(float(x))


def _hermite(run: _Run, f, ns: NodeSet):
    try:
        return hermite_data_from_expr(f, ns), ns
    except InexactError as exc:
        run.fall_back_to_float(exc)
        ns = ns.to_domain(FLOAT)
        return hermite_data_from_expr(f, ns), ns


def _check_conditioning(run: _Run, ns: NodeSet) -> None:
    if ns.domain is FLOAT and ns.n > CONDITIONING_LIMIT:
        run.warn(f"n = {ns.n} > {CONDITIONING_LIMIT}: the float confluent Vandermonde solve is "
                 "ill-conditioned; prefer --backend exact with rational nodes")


def cmd_interp(cfg: RunConfig, out=None, err=None) -> int:
    run = _Run(cfg, err or sys.stderr)
    f = run.parse_function()
    ns = run.nodeset()
    data, ns = _hermite(run, f, ns)
    _check_conditioning(run, ns)
    osc = osculate_vandermonde(data)
    coeffs = osc.g.to_strings()
    run.result["coefficients"]["g"] = coeffs
    run.lines.append(f"g = {_fmt_list(coeffs)}")

    if cfg.domain is not None:
        ns = run.interval(ns)
    if cfg.evals or cfg.grid or cfg.witness:
        if ns.interval is None:
            ns = run.interval(ns)
        fns = ns.to_domain(FLOAT)
        fosc = osc if ns.domain is FLOAT else Osculant(osc.g.to_domain(FLOAT), osc.h.to_domain(FLOAT), fns)
        drange = derivative_range(f, ns.n, fns.interval)
        evals = []
        for text in cfg.evals:
            x = run.point(text, ns)
            g_x, bound = taylor_value_with_bound(f, fns, float(x), fns.interval, fosc, drange)
            f_x = float(evaluate(f, float(x)))
            if ns.domain is EXACT:
                g_exact = osc.g(x)
                g_str = format_scalar(g_exact)
                g_x = float(g_exact)
            else:
                g_str = _f(g_x)
            err_x = abs(f_x - g_x)
            evals.append({"x": format_scalar(x), "g": g_str, "f": _f(f_x),
                          "abs_err": _f(err_x), "bound": _f(bound)})
            run.lines.append(f"x = {format_scalar(x)}: g = {g_str}, f = {_f(f_x)}, "
                             f"abs_err = {_f(err_x)}, bound = {_f(bound)}")
        if evals:
            run.result["diagnostics"]["evaluations"] = evals
        if cfg.witness:
            x = float(run.point(cfg.witness, ns))
            q = remainder_quotient(f, fosc, x)
            c = c_witness(f, fns, x, fns.interval, fosc)
            residual = float(derivative_at(f, c, ns.n)) - q
            run.result["diagnostics"].update({"witness": {"x": _f(x), "q": _f(q), "c": _f(c),
                                                          "residual": _f(residual)}})
            run.lines.append(f"witness x = {_f(x)}: q = {_f(q)}, c = {_f(c)}, residual = {_f(residual)}")
        if cfg.grid:
            rows = []
            for t in np.linspace(float(fns.interval[0]), float(fns.interval[1]), cfg.grid):
                t = float(t)
                g_t, bound = taylor_value_with_bound(f, fns, t, fns.interval, fosc, drange)
                f_t = float(evaluate(f, t))
                rows.append([_f(t), _f(f_t), _f(g_t), _f(abs(f_t - g_t)), _f(bound)])
            run.set_table(["x", "f", "g", "abs_err", "bound"], rows)
    run.finish(out or sys.stdout)
    return 0


def cmd_rational(cfg: RunConfig, out=None, err=None) -> int:
    run = _Run(cfg, err or sys.stderr)
    f = run.parse_function()
    if cfg.deg_num is None or cfg.deg_den is None:
        raise ParseError("rational needs --deg-num and --deg-den")
    ns = run.nodeset()
    data, ns = _hermite(run, f, ns)
    _check_conditioning(run, ns)
    R = rational_fit(data, cfg.deg_num, cfg.deg_den)
    u, v = R.u.to_strings(), R.v.to_strings()
    run.result["coefficients"].update({"u": u, "v": v})
    run.lines.append(f"u = {_fmt_list(u)}")
    run.lines.append(f"v = {_fmt_list(v)}")

    if cfg.domain is not None:
        ns = run.interval(ns)
    if cfg.evals or cfg.grid:
        if ns.interval is None:
            ns = run.interval(ns)
        fns = ns.to_domain(FLOAT)
        fv_max = max_product_derivative(f, R.v, ns.n, fns.interval)

        def row(x):
            xf = float(x)
            f_x = float(evaluate(f, xf))
            try:
                r = float(rational_eval(R, x))
            except PoleError:
                return [_f(xf), _f(f_x), "", "", "", "pole"]
            bound = rational_remainder_bound(f, R, xf, fns.interval, fv_max=fv_max)
            return [_f(xf), _f(f_x), _f(r), _f(abs(f_x - r)), _f(bound), ""]

        evals = []
        for text in cfg.evals:
            x = run.point(text, ns)
            r = row(x)
            evals.append(dict(zip(["x", "f", "u_over_v", "abs_err", "bound", "pole"], r)))
            if r[-1] == "pole":
                run.lines.append(f"x = {format_scalar(x)}: pole")
            else:
                run.lines.append(f"x = {format_scalar(x)}: u/v = {r[2]}, f = {r[1]}, "
                                 f"abs_err = {r[3]}, bound = {r[4]}")
        if evals:
            run.result["diagnostics"]["evaluations"] = evals
        if cfg.grid:
            ts = np.linspace(float(fns.interval[0]), float(fns.interval[1]), cfg.grid)
            run.set_table(["x", "f", "u_over_v", "abs_err", "bound", "pole"], [row(float(t)) for t in ts])
    run.finish(out or sys.stdout)
    return 0


def cmd_rolle(cfg: RunConfig, out=None, err=None) -> int:
    run = _Run(cfg, err or sys.stderr)
    ns = run.nodeset()
    table = zero_count_table(ns)
    fns = ns.to_domain(FLOAT)
    numeric = [verify_rolle_numeric(fns, k) for k in range(ns.n)]
    run.result["coefficients"]["h"] = build_modulus(ns).to_strings()
    run.result["diagnostics"]["rolle_table"] = [
        {"k": k, "count": c, "numeric": m} for k, (c, m) in enumerate(zip(table, numeric))
    ]
    run.lines.append("k #h^(k) numeric")
    for k, (c, m) in enumerate(zip(table, numeric)):
        run.lines.append(f"{k} {c} {m}")
    run.set_table(["k", "count", "numeric"], [[str(k), str(c), str(m)] for k, (c, m) in
                                              enumerate(zip(table, numeric))])
    run.table_in_text = False
    run.lines.append(f"#h^(n-1) = {table[-1]}")
    status = 0
    if table[-1] != 1 or any(m < c for c, m in zip(table, numeric)):
        print("error: numeric zero count fell below the guaranteed count", file=run.err)
        status = 3
    run.finish(out or sys.stdout)
    return status


COMMANDS = {"interp": cmd_interp, "rational": cmd_rational, "rolle": cmd_rolle}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--f", dest="function", metavar="EXPR", help="function of x, e.g. 'exp(x)'")
    common.add_argument("--nodes", required=True, metavar="LIST", help="nodes as x:m,x:m,...")
    common.add_argument("--domain", metavar="a:b", help="interval [a,b] (default: node span)")
    common.add_argument("--eval", dest="evals", action="append", default=[], metavar="X",
                        help="evaluation point (repeatable)")
    common.add_argument("--grid", type=int, metavar="N", help="tabulate N uniform points of [a,b]")
    common.add_argument("--backend", choices=("exact", "float"), default="float")
    common.add_argument("--csv", metavar="PATH", help="write the grid table as CSV")
    common.add_argument("--json-out", metavar="PATH", help="write all results as JSON")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text",
                        help="standard output format")

    parser = argparse.ArgumentParser(prog="gts", description="Osculating polynomial and rational "
                                     "approximation modulo h(x) = prod (x - x_i)^m_i")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p = sub.add_parser("interp", parents=[common], help="osculating polynomial with error bounds")
    p.add_argument("--witness", metavar="X", help="find the mean-value point c for x = X")
    p = sub.add_parser("rational", parents=[common], help="rational approximant u/v")
    p.add_argument("--deg-num", type=int, required=True, metavar="D")
    p.add_argument("--deg-den", type=int, required=True, metavar="D")
    sub.add_parser("rolle", parents=[common], help="generalized Rolle zero-count table")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    opts = vars(args)
    try:
        cfg = RunConfig(**opts)
        return COMMANDS[cfg.subcommand](cfg, out, err)
    except GTSError as exc:
        print(f"error: {exc}", file=err)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return 4


if __name__ == "__main__":
    sys.exit(main())
