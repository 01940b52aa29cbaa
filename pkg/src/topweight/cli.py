"""Command-line driver: ``topweight <command> [options]``.

Exit status is 0 on success, 1 on a usage error and 2 when two independent
computations of the same quantity disagree.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence

from . import graphcore, orbigraph, zagier
from .symfunc import PSeries, partition_sort_key

COMMANDS = (
    "zg",
    "euler",
    "schur",
    "oracle-graphs",
    "oracle-orbifold",
    "oracle-gamma",
    "dump-terms",
    "dump-graphs",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class Result:
    data: object
    header: List[str]
    rows: List[List[object]]
    disagreement: Optional[str] = None


def _frac(c: Fraction) -> dict:
    return {"num": str(c.numerator), "den": str(c.denominator)}


def _decimal(c: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(c.numerator) / Decimal(c.denominator))


def _part(lam) -> str:
    return " ".join(str(p) for p in lam) or "()"


def _series_rows(a: PSeries) -> List[List[object]]:
    return [[_part(lam), c] for lam, c in a.items()]


def _first_difference(a: PSeries, b: PSeries) -> Optional[str]:
    N = min(a.truncation, b.truncation)
    keys = {l for l in a.terms if l.n <= N} | {l for l in b.terms if l.n <= N}
    for lam in sorted(keys, key=partition_sort_key):
        x, y = a.coeff(lam), b.coeff(lam)
        if x != y:
            return f"coefficient of p[{_part(lam)}]: {x} vs {y}"
    return None


def _jobs(args) -> int:
    if args.jobs is not None:
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        return args.jobs
    return graphcore.default_jobs()


def _truncation(args) -> int:
    N = zagier.default_truncation(args.genus) if args.truncate is None else args.truncate
    if N < 0:
        raise UsageError("--truncate must be >= 0")
    return N


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n} is required for {args.command}")


# commands

def cmd_zg(args) -> Result:
    _need(args, "genus")
    if args.genus < 0:
        raise UsageError("--genus must be >= 0")
    a = zagier.z_series(args.genus, _truncation(args))
    return Result(a.to_json(), ["partition", "coefficient"], _series_rows(a))


def cmd_euler(args) -> Result:
    _need(args, "genus", "n")
    g, n = args.genus, args.n
    if g < 0 or n < 0:
        raise UsageError("--genus and --n must be >= 0")
    series = zagier.top_weight_euler(g, n)
    try:
        closed = zagier.top_weight_euler_closed(g, n)
    except ValueError:
        closed = None
    agree = closed is None or closed == series
    data = {
        "genus": g,
        "n": n,
        "series": _frac(series),
        "closed": _frac(closed) if closed is not None else None,
        "agreement": agree if closed is not None else None,
    }
    rows = [["series", series], ["closed", "" if closed is None else closed]]
    out = Result(data, ["method", "value"], rows)
    if not agree:
        out.disagreement = f"Euler characteristic ({g},{n}): series {series} vs closed form {closed}"
    return out


def cmd_schur(args) -> Result:
    _need(args, "genus", "n")
    if args.genus < 0 or args.n < 0:
        raise UsageError("--genus and --n must be >= 0")
    t = zagier.equivariant_table(args.genus, args.n)
    return Result(t.to_json(), ["partition", "coefficient"], [[_part(l), c] for l, c in t.items()])


def cmd_oracle_graphs(args) -> Result:
    _need(args, "genus")
    if args.genus < 2:
        raise UsageError("oracle-graphs needs --genus >= 2")
    N = _truncation(args)
    oracle = graphcore.z_g_graph_oracle(args.genus, N, jobs=_jobs(args))
    formula = zagier.z_g(args.genus, N)
    diff = _first_difference(oracle, formula)
    data = {"genus": args.genus, "oracle": oracle.to_json(), "formula": formula.to_json(), "agreement": diff is None}
    keys = sorted(set(oracle.terms) | set(formula.terms), key=partition_sort_key)
    rows = [[_part(l), oracle.coeff(l), formula.coeff(l)] for l in keys]
    return Result(data, ["partition", "oracle", "formula"], rows, disagreement=diff)


def cmd_oracle_orbifold(args) -> Result:
    _need(args, "genus", "n")
    g, n = args.genus, args.n
    if g < 0 or n < 0 or 2 * g - 2 + n <= 0:
        raise UsageError("unstable range: need 2g - 2 + n > 0")
    a, b = graphcore.chi_orb_oracle(g, n), graphcore.chi_orb(g, n)
    data = {"genus": g, "n": n, "enumeration": _frac(a), "closed": _frac(b), "agreement": a == b}
    out = Result(data, ["method", "value"], [["enumeration", a], ["closed", b]])
    if a != b:
        out.disagreement = f"orbifold Euler characteristic ({g},{n}): {a} vs {b}"
    return out


def cmd_oracle_gamma(args) -> Result:
    _need(args, "m", "r")
    if args.m < 1 or args.r < 0:
        raise UsageError("need --m >= 1 and --r >= 0")
    try:
        d = [int(x) for x in args.d.split(",") if x.strip()] if args.d else []
    except ValueError:
        raise UsageError("--d must be a comma-separated list of integers")
    if any(x < 1 or args.m % x for x in d):
        raise UsageError("every entry of --d must be a positive divisor of --m")
    D = args.m
    for x in d:
        D = gcd(D, x)
    a, b = orbigraph.gamma_formula(args.m, args.r, D), orbigraph.gamma_oracle(args.m, args.r, d)
    data = {"m": args.m, "r": args.r, "d": d, "D": D, "formula": _frac(a), "oracle": _frac(b), "agreement": a == b}
    out = Result(data, ["method", "value"], [["formula", a], ["oracle", b]])
    if a != b:
        out.disagreement = f"gamma(m={args.m}, r={args.r}, d={d}): {a} vs {b}"
    return out


def cmd_dump_terms(args) -> Result:
    _need(args, "genus")
    if args.genus < 2:
        raise UsageError("dump-terms needs --genus >= 2")
    terms = zagier.enumerate_terms(args.genus)
    data = zagier.terms_to_json(terms)
    rows = [
        [t.k, t.m, t.r, _part(t.d), _part(t.a), zagier.term_coefficient(t)] for t in terms
    ]
    return Result(data, ["k", "m", "r", "d", "a", "coefficient"], rows)


def cmd_dump_graphs(args) -> Result:
    _need(args, "genus")
    n = args.n or 0
    if args.genus < 0 or n < 0 or 2 * args.genus - 2 + n <= 0:
        raise UsageError("unstable range: need 2g - 2 + n > 0")
    if n == 0:
        graphs = [graphcore.MarkedGraph(G) for G in graphcore.enumerate_stable_graphs(args.genus)]
    else:
        graphs = graphcore.enumerate_marked_graphs(args.genus, n)
    data = []
    rows = []
    for mg in graphs:
        order = len(graphcore.marked_automorphisms(mg))
        entry = mg.to_json()
        entry["automorphisms"] = order
        data.append(entry)
        rows.append([mg.graph.num_vertices, mg.graph.num_edges, " ".join(map(str, mg.graph.s)),
                     " ".join(map(str, mg.graph.r)), " ".join(map(str, mg.marking)), order])
    return Result(data, ["vertices", "edges", "s", "r", "marking", "automorphisms"], rows)


HANDLERS = {
    "zg": cmd_zg,
    "euler": cmd_euler,
    "schur": cmd_schur,
    "oracle-graphs": cmd_oracle_graphs,
    "oracle-orbifold": cmd_oracle_orbifold,
    "oracle-gamma": cmd_oracle_gamma,
    "dump-terms": cmd_dump_terms,
    "dump-graphs": cmd_dump_graphs,
}


# rendering

def _attach_decimals(obj, digits: int):
    if isinstance(obj, dict):
        out = {k: _attach_decimals(v, digits) for k, v in obj.items()}
        if isinstance(obj.get("num"), str) and isinstance(obj.get("den"), str):
            out["decimal_lossy"] = _decimal(Fraction(int(obj["num"]), int(obj["den"])), digits)
        return out
    if isinstance(obj, list):
        return [_attach_decimals(v, digits) for v in obj]
    return obj


def render(res: Result, fmt: str, digits: Optional[int] = None) -> str:
    if fmt == "json":
        data = _attach_decimals(res.data, digits) if digits else res.data
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        ncols = len(res.header)
        nfrac = max((sum(isinstance(x, Fraction) for x in row) for row in res.rows), default=0)
        extra = [f"decimal_lossy_{i + 1}" for i in range(nfrac)] if digits else []
        w.writerow(res.header + extra)
        for row in res.rows:
            flat = [str(x) for x in row]
            if digits:
                fr = [_decimal(x, digits) for x in row if isinstance(x, Fraction)]
                flat += fr + [""] * (nfrac - len(fr))
            w.writerow(flat[: ncols + len(extra)])
        return buf.getvalue()
    lines = []
    for row in res.rows:
        cells = [str(x) for x in row]
        if digits:
            cells += ["~" + _decimal(x, digits) for x in row if isinstance(x, Fraction)]
        lines.append("  ".join(cells))
    return "\n".join(lines) + ("\n" if lines else "")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="topweight", description="Top-weight Euler characteristics of M_{g,n}.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--genus", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--truncate", type=int, help="series truncation degree (default 3g+6)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.add_argument("--decimal", type=int, metavar="DIGITS", help="also print lossy decimal approximations")
    p.add_argument("--jobs", type=int, help="worker processes (default: $TOPWEIGHT_JOBS or CPU count)")
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--d", help="comma-separated divisors of m")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.decimal is not None and args.decimal < 1:
            raise UsageError("--decimal must be >= 1")
        res = HANDLERS[args.command](args)
    except UsageError as e:
        print(f"topweight: error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"topweight: error: {e}", file=sys.stderr)
        return 1
    text = render(res, args.format, args.decimal)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if res.disagreement:
        print(f"topweight: pipelines disagree: {res.disagreement}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
