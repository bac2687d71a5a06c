"""Command-line front end.

    python -m periodred compactify FILE
    python -m periodred reduce FILE [--seed N] [--samples N] [--budget N]
    python -m periodred plot2d FILE [--resolution N] [--stage input|compact|resolved]

Output is line-oriented ``key: value`` records.  Exit codes: 0 success,
2 parse error, 3 budget exceeded, 4 divergence, 5 out of scope, 1 other.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .blowup2 import (
    ChartBudgetExceeded,
    DivergenceError,
    ScopeError,
    StepBudgetExceeded,
    UnresolvedPoint,
    resolve_poles,
)
from .certify import Unbounded, bounding_box
from .diffvol import BudgetExceeded
from .numeric import compile_set
from .parsing import ParseError, parse_problem, parse_set
from .pipeline import reduce_period, stage_estimate
from .projcharts import compactify_domain
from .trace import ReductionTrace

__all__ = ["main", "cmd_compactify", "cmd_reduce", "cmd_plot2d", "EXIT"]

EXIT = {"ok": 0, "other": 1, "parse": 2, "budget": 3, "divergence": 4, "scope": 5}


def _load(path: str, radicand: int | None):
    text = Path(path).read_text() if path != "-" else sys.stdin.read()
    prob = parse_problem(text)
    if radicand:
        prob.radicand = radicand
    return prob


def _emit(out, key, value):
    print(f"{key}: {value}", file=out or sys.stdout)


def _write_trace(trace: ReductionTrace, out, path: str | None):
    lines = trace.lines()
    if path:
        Path(path).write_text("\n".join(lines) + "\n")
    for line in lines:
        _emit(out, "trace", line)


def cmd_compactify(args, out=None) -> int:
    prob = _load(args.file, args.radicand)
    trace = ReductionTrace()
    pieces = compactify_domain(prob.piece(), trace)
    _emit(out, "problem", prob.name or args.file)
    for k, p in enumerate(pieces):
        _emit(out, f"piece[{k}]", p)
        _emit(out, f"box[{k}]", " x ".join(f"[{lo}, {hi}]" for lo, hi in p.meta["box"]))
    _write_trace(trace, out, args.trace)
    return EXIT["ok"]


def cmd_reduce(args, out=None) -> int:
    prob = _load(args.file, args.radicand)
    trace = ReductionTrace()
    red = reduce_period(prob.piece(), radicand=prob.radicand, trace=trace,
                        step_budget=args.budget, reflect=args.reflect,
                        samples=args.samples, seed=args.seed)
    _emit(out, "problem", prob.name or args.file)
    for stage in ("sign", "compact", "resolved"):
        for s, p in red.stages.get(stage, []):
            _emit(out, f"{stage}[{'+' if s > 0 else '-'}]", p)
    K = red.K
    if hasattr(K, "to_semialg"):
        _emit(out, "K.kind", "difference")
        _emit(out, "K.offset", ", ".join(str(o) for o in K.offset))
        _emit(out, "K.grid", f"r={K.grid.r} n={K.grid.n} moved={len(K.perm.moved())}")
        if args.full:
            _emit(out, "K", K.to_semialg())
        else:
            _emit(out, "K1", K.K1)
            _emit(out, "K2", K.K2)
    else:
        _emit(out, "K.kind", "union")
        _emit(out, "K", K)
    _emit(out, "K.vars", ", ".join(K.vars))
    _emit(out, "K.box", " x ".join(f"[{lo}, {hi}]" for lo, hi in red.box))
    _emit(out, "sign", f"{red.sign:+d}")
    vol = red.K_volume(args.samples, args.seed)
    _emit(out, "volume", f"{vol.value:.6f} +- {vol.half_width:.2g} (n={vol.samples})")
    integ = stage_estimate([p for _, p in red.stages["resolved"]], args.samples, args.seed)
    _emit(out, "integral", f"{integ.value:.6f} +- {integ.half_width:.2g} (pieces after resolution)")
    agree = abs(red.sign * vol.value - integ.value) <= vol.half_width + integ.half_width + 1e-12
    _emit(out, "agree", "yes" if agree else "no")
    _write_trace(trace, out, args.trace)
    return EXIT["ok"]


def cmd_plot2d(args, out=None) -> int:
    if args.set:
        vars = tuple(args.vars.split(",")) if args.vars else None
        S = parse_set(args.set, vars)
        sets = [S]
    else:
        prob = _load(args.file, args.radicand)
        if args.stage == "input":
            sets = [prob.domain]
        else:
            red_pieces = compactify_domain(prob.piece(), ReductionTrace())
            if args.stage == "resolved":
                red_pieces = [q for p in red_pieces for q in resolve_poles(p, None, prob.radicand)]
            sets = [p.domain for p in red_pieces]
    if any(len(S.vars) != 2 for S in sets):
        raise ScopeError("plot2d needs a set in two variables")
    n = args.resolution
    out = out or sys.stdout
    print("piece\tx\ty\tinside", file=out)
    for k, S in enumerate(sets):
        box = bounding_box(S)
        lo = np.array([float(b[0]) for b in box])
        hi = np.array([float(b[1]) for b in box])
        pad = (hi - lo) * 0.05
        gx = np.linspace(lo[0] - pad[0], hi[0] + pad[0], n)
        gy = np.linspace(lo[1] - pad[1], hi[1] + pad[1], n)
        X, Y = np.meshgrid(gx, gy, indexing="ij")
        inside = compile_set(S)(np.column_stack([X.ravel(), Y.ravel()])).reshape(n, n)
        keep = np.ones_like(inside) if not args.boundary else _boundary_mask(inside)
        for i, j in zip(*np.nonzero(keep)):
            print(f"{k}\t{X[i, j]:.6g}\t{Y[i, j]:.6g}\t{int(inside[i, j])}", file=out)
    return EXIT["ok"]


def _boundary_mask(inside):
    m = np.zeros_like(inside)
    m[1:, :] |= inside[1:, :] != inside[:-1, :]
    m[:-1, :] |= inside[1:, :] != inside[:-1, :]
    m[:, 1:] |= inside[:, 1:] != inside[:, :-1]
    m[:, :-1] |= inside[:, 1:] != inside[:, :-1]
    return m


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="periodred", description="Reduce period integrals to volumes.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--radicand", type=int, default=None, help="work over Q(sqrt(n))")
        sp.add_argument("--trace", metavar="PATH", default=None, help="also write the trace here")

    c = sub.add_parser("compactify", help="split and chart an unbounded domain")
    c.add_argument("file")
    common(c)

    r = sub.add_parser("reduce", help="run the full reduction")
    r.add_argument("file")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--samples", type=int, default=1_000_000)
    r.add_argument("--budget", type=int, default=64, help="blow-up step budget")
    r.add_argument("--reflect", action="store_true", help="glue two matching graphs across t = 0")
    r.add_argument("--full", action="store_true", help="print a difference set as an explicit union")
    common(r)

    g = sub.add_parser("plot2d", help="grid samples of a planar set, classified in/out")
    g.add_argument("file", nargs="?")
    g.add_argument("--set", default=None, help="set text instead of a problem file")
    g.add_argument("--vars", default=None, help="comma-separated variables for --set")
    g.add_argument("--stage", choices=("input", "compact", "resolved"), default="input")
    g.add_argument("--resolution", type=int, default=64)
    g.add_argument("--boundary", action="store_true", help="only points next to the boundary")
    common(g)
    return p


_COMMANDS = {"compactify": cmd_compactify, "reduce": cmd_reduce, "plot2d": cmd_plot2d}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "plot2d" and not (args.file or args.set):
        print("error: plot2d needs a problem file or --set", file=sys.stderr)
        return EXIT["other"]
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT["parse"]
    except (StepBudgetExceeded, ChartBudgetExceeded, BudgetExceeded) as exc:
        print(f"budget exceeded{_where(exc)}: {exc}", file=sys.stderr)
        return EXIT["budget"]
    except DivergenceError as exc:
        print(f"divergent integral{_where(exc)}: {exc}", file=sys.stderr)
        return EXIT["divergence"]
    except ScopeError as exc:
        print(f"{exc}{_where(exc)}", file=sys.stderr)
        return EXIT["scope"]
    except (Unbounded, UnresolvedPoint, ValueError, OSError) as exc:
        print(f"error{_where(exc)}: {exc}", file=sys.stderr)
        return EXIT["other"]


def _where(exc) -> str:
    stage = getattr(exc, "stage", None)
    if stage is None:
        return ""
    return f" in {stage} after trace step {getattr(exc, 'trace_step', '?')}"


if __name__ == "__main__":
    sys.exit(main())
