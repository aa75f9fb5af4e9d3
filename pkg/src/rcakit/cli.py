"""Command-line entry point: ``rcakit {eval,symbol,hilbert,grtable,verify}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .bimod import gr_comparison, stderr_progress
from .errors import ExprError, PoleAtSpecialization, RcaError, UnknownSuite
from .expr import evaluate, parse_function, render, render_symbol
from .isotypic import hilbert_table
from .scalar import C, K, parse_rational
from .skew import SkewOperator, principal_symbol, specialize_c, spherical_scalar_symbol
from .verify import SUITES, SuiteOptions, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _rank(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("n must be at least 2")
    return n


def _pair(text: str) -> tuple[int, int]:
    try:
        dx, dy = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected DX,DY, got {text!r}") from None
    if dx < 0 or dy < 0:
        raise argparse.ArgumentTypeError("bounds must be non-negative")
    return dx, dy


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError, RcaError) as exc:
        raise argparse.ArgumentTypeError(f"expected an exact rational p/q, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rcakit", description="Exact computations in spherical rational Cherednik algebras of type A.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, with_c=True):
        sp.add_argument("--n", type=_rank, required=True, help="rank of the symmetric group S_n")
        if with_c:
            sp.add_argument("--c", type=_rational, default=None, help="rational parameter p/q (default: formal c)")
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--output", "-o", default=None, help="write the result to this file instead of stdout")

    sp = sub.add_parser("eval", help="parse and normalize an operator expression")
    common(sp)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--apply", default=None, help="function of x1..xn to apply the operator to")

    sp = sub.add_parser("symbol", help="principal symbol of an operator expression")
    common(sp)
    sp.add_argument("--expr", required=True)

    sp = sub.add_parser("hilbert", help="bigraded dimensions of A^m")
    common(sp, with_c=False)
    sp.add_argument("--isotype", choices=("triv", "sign"), default="sign")
    sp.add_argument("--m", type=_nonneg, default=1)
    sp.add_argument("--maxdeg", type=_pair, required=True, metavar="DX,DY")

    sp = sub.add_parser("grtable", help="compare gr of a bimodule with its predicted graded module")
    common(sp)
    sp.add_argument("--m", type=_nonneg, default=1)
    sp.add_argument("--side", choices=("Q", "P"), default="Q")
    sp.add_argument("--maxdeg", type=_pair, required=True, metavar="DX,DY")
    sp.add_argument("--slack", type=_nonneg, default=2)

    sp = sub.add_parser("verify", help="run a named verification suite")
    common(sp)
    sp.add_argument("--suite", required=True, help=", ".join(SUITES))
    sp.add_argument("--m", type=_nonneg, default=None)
    sp.add_argument("--maxdeg", type=_pair, default=None, metavar="DX,DY")
    sp.add_argument("--slack", type=_nonneg, default=None)
    sp.add_argument("--json", dest="json_path", default=None, metavar="PATH", help="also write the JSON report here")
    return p


# ---------------------------------------------------------------------------
# commands


def _kappa(args):
    return C if args.c is None else K(args.c)


def _param(args) -> dict:
    return {"mode": "formal"} if args.c is None else {"mode": "rational", "value": str(args.c)}


def _operator(args):
    """Elaborate --expr; with --c every occurrence of the parameter is specialized."""
    u = evaluate(args.expr, args.n, _kappa(args))
    return u if args.c is None else specialize_c(u, args.c)


def _cmd_eval(args):
    u = _operator(args)
    data = {"n": args.n, "param": _param(args), "expr": args.expr, "operator": render(u)}
    text = data["operator"]
    if args.apply is not None:
        f = parse_function(args.apply, args.n)
        if args.c is not None:
            f = f.evaluate_c(args.c)
        out = render(SkewOperator.from_locfrac(u.apply(f)))
        data["applied_to"], data["result"] = args.apply, out
        text = out
    return data, text, [("operator", data["operator"])] + ([("result", data["result"])] if "result" in data else []), True


def _cmd_symbol(args):
    u = _operator(args)
    sym = principal_symbol(u)
    data = {"n": args.n, "param": _param(args), "expr": args.expr, "order": u.gamma_degree(), "symbol": render_symbol(sym)}
    lines = [f"order: {data['order']}", f"symbol: {data['symbol']}"]
    try:
        data["spherical"] = str(spherical_scalar_symbol(u))
        lines.append(f"spherical: ({data['spherical']}) * e")
    except RcaError:
        pass
    rows = [(k, data[k]) for k in ("order", "symbol", "spherical") if k in data]
    return data, "\n".join(lines), rows, True


def _cmd_hilbert(args):
    table = hilbert_table(args.n, args.isotype, args.m, args.maxdeg)
    data = {"n": args.n, "isotype": args.isotype, "m": args.m, "maxdeg": list(args.maxdeg), "rows": table.to_rows()}
    dx, dy = args.maxdeg
    header = "i\\j " + " ".join(f"{j:>4}" for j in range(dy + 1))
    body = [f"{i:>3} " + " ".join(f"{table[(i, j)]:>4}" for j in range(dy + 1)) for i in range(dx + 1)]
    rows = [(r["i"], r["j"], r["dim"]) for r in data["rows"]]
    return data, "\n".join([header, *body]), (("i", "j", "dim"), rows), True


def _cmd_grtable(args):
    cmp = gr_comparison(args.n, args.m, args.side, args.maxdeg, args.slack, _kappa(args), stderr_progress)
    data = cmp.as_dict()
    data["param"] = _param(args)
    data["ok"] = cmp.ok
    lines = [f"{'i':>3} {'j':>3} {'span':>5} {'target':>6}  status"]
    for r in cmp.records:
        flag = "" if r.trusted else "  (untrusted)"
        lines.append(f"{r.bidegree[0]:>3} {r.bidegree[1]:>3} {r.span_dim:>5} {r.target_dim:>6}  {r.status}{flag}")
    lines.append("ok" if cmp.ok else "FAILED")
    rows = [(r.bidegree[0], r.bidegree[1], r.span_dim, r.target_dim, r.status) for r in cmp.records]
    return data, "\n".join(lines), (("i", "j", "span", "target", "status"), rows), cmp.ok


def _cmd_verify(args):
    opts = SuiteOptions(param=args.c, progress=stderr_progress)
    if args.m is not None:
        opts.m = args.m
    if args.maxdeg is not None:
        opts.bounds = args.maxdeg
    if args.slack is not None:
        opts.slack = args.slack
    report = run_suite(args.suite, args.n, opts)
    data = report.as_dict()
    lines = [f"[{c.status.upper():>4}] {c.name}: {c.detail}" for c in report.checks] + [report.summary()]
    rows = [(c.name, c.status, c.detail, c.ms) for c in report.checks]
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    return data, "\n".join(lines), (("name", "status", "detail", "ms"), rows), report.passed


COMMANDS = {
    "eval": _cmd_eval,
    "symbol": _cmd_symbol,
    "hilbert": _cmd_hilbert,
    "grtable": _cmd_grtable,
    "verify": _cmd_verify,
}


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(rows, tuple):
        header, body = rows
        w.writerow(header)
        w.writerows(body)
    else:
        w.writerow(("key", "value"))
        w.writerows(rows)
    return buf.getvalue().rstrip("\n")


# options whose values may legitimately start with '-' (negative rationals, "-x1")
_SIGNED_VALUE_OPTIONS = ("--c", "--expr", "--apply")


def _attach_signed_values(argv: list[str]) -> list[str]:
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _SIGNED_VALUE_OPTIONS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_attach_signed_values(argv))
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        data, text, rows, ok = COMMANDS[args.command](args)
    except (ExprError, UnknownSuite, PoleAtSpecialization) as exc:
        print(f"rcakit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RcaError as exc:
        print(f"rcakit {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL

    if args.format == "json":
        out = json.dumps(data, indent=2)
    elif args.format == "csv":
        out = _csv(rows)
    else:
        out = text
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return EXIT_OK if ok else EXIT_FAIL


def dispatch(argv) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
