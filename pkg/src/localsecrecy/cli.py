"""Command-line front end.

Subcommands::

    localsecrecy approx FILE [--out SOLUTION.json]
    localsecrecy exact FILE [--resolution 1e-3]
    localsecrecy sweep-bsc [--q 0.45 --delta 0.085 --epsilon 1e-3 ...] [--out CSV]
    localsecrecy kkt FILE --solution SOLUTION.json

Exit codes: 0 success, 1 input error, 2 solver did not converge, 3 KKT FAIL.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bsc import (
    BscWiretapInstance,
    approx_secrecy_capacity,
    exact_secrecy_capacity_bsc,
    regime_classify,
)
from .errors import LocalSecrecyError
from .optimizer import Solution, alternate, kkt_check, leakage, rate
from .oracle import exact_secrecy_capacity_grid
from .prob_core import to_bits
from .problem_file import load

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_KKT_FAIL = 0, 1, 2, 3

SWEEP_HEADER = [
    "p",
    "lambda_v",
    "lambda_lam",
    "regime",
    "cs_approx_raw",
    "cs_approx_rescaled",
    "cs_exact_nats",
    "cs_exact_bits",
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(xs) -> str:
    return "[" + ", ".join(repr(float(x)) for x in xs) + "]"


def cmd_approx(args, out) -> int:
    pf = load(args.file)
    prob = pf.problem()
    sol = alternate(prob, pf.seed, tol=pf.tol, max_iter=pf.max_iter, restarts=pf.restarts)
    info = sol.information(prob.epsilon)
    p = sol.p_u.probs
    active = []
    rb, lb = prob.rate_budget, prob.leakage_budget
    if abs(rate(prob, p, sol.l) - rb) <= 1e-8 * max(1.0, rb):
        active.append("rate")
    if math.isfinite(lb) and abs(leakage(prob, p, sol.l) - lb) <= 1e-8 * max(1.0, lb):
        active.append("leakage")
    print(f"objective                {sol.objective!r}", file=out)
    print(f"information (nats)       {info!r}", file=out)
    print(f"information (bits)       {to_bits(info)!r}", file=out)
    print(f"P_U                      {_fmt(p)}", file=out)
    print(f"||L_u||                  {_fmt(np.linalg.norm(sol.l, axis=1))}", file=out)
    print(f"active constraints       {', '.join(active) if active else 'none'}", file=out)
    print(f"nu, rho                  {sol.nu!r}, {sol.rho!r}", file=out)
    print(f"iterations               {sol.iterations}", file=out)
    print(f"converged                {'yes' if sol.converged else 'no'}", file=out)
    if args.out:
        Path(args.out).write_text(json.dumps(sol.to_json_dict(), indent=2) + "\n")
    return EXIT_OK if sol.converged else EXIT_NOT_CONVERGED


def cmd_exact(args, out) -> int:
    pf = load(args.file)
    main, eaves = pf.channels()
    res = exact_secrecy_capacity_grid(main, eaves, args.resolution)
    print(f"secrecy capacity (nats)  {res.best_value!r}", file=out)
    print(f"secrecy capacity (bits)  {to_bits(res.best_value)!r}", file=out)
    print(f"argmax P_X               {_fmt(res.argmax)}", file=out)
    print(f"gridpoints               {res.samples_or_gridpoints}", file=out)
    print(f"resolution               {res.resolution!r}", file=out)
    return EXIT_OK


def sweep_rows(q, delta, epsilon, pmin, pmax, steps, rate_budget=1.0):
    if steps < 1:
        raise LocalSecrecyError("steps must be >= 1")
    if not (0 < pmin and pmax < q <= 0.5 and (pmin < pmax or (steps == 1 and pmin == pmax))):
        raise LocalSecrecyError(
            f"need 0 < pmin < pmax < q <= 0.5, got pmin={pmin}, pmax={pmax}, q={q}"
        )
    if not delta > 0:
        raise LocalSecrecyError("delta must be positive")
    theta = delta * rate_budget
    ps = [pmin] if steps == 1 else np.linspace(pmin, pmax, steps).tolist()
    rows = []
    for p in ps:
        inst = BscWiretapInstance(p, q, rate_budget, theta, epsilon)
        raw = approx_secrecy_capacity(inst)
        exact = exact_secrecy_capacity_bsc(p, q)
        rows.append(
            [
                p,
                inst.lambda_v,
                inst.lambda_lam,
                regime_classify(inst).value,
                raw,
                raw * epsilon**2 / 2.0,
                exact,
                to_bits(exact),
            ]
        )
    return rows


def cmd_sweep_bsc(args, out) -> int:
    rows = sweep_rows(args.q, args.delta, args.epsilon, args.pmin, args.pmax, args.steps, args.rate)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for row in rows:
        w.writerow([r if isinstance(r, str) else repr(float(r)) for r in row])
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_kkt(args, out) -> int:
    pf = load(args.file)
    prob = pf.problem()
    path = Path(args.solution)
    if not path.is_file():
        raise LocalSecrecyError(f"solution file not found: {path}")
    try:
        sol = Solution.from_json_dict(json.loads(path.read_text()))
    except json.JSONDecodeError as exc:
        raise LocalSecrecyError(f"{path}: {exc}") from None
    if sol.l.shape != (prob.u_size, prob.x_size) or len(sol.p_u) != prob.u_size:
        raise LocalSecrecyError(
            f"solution shape {sol.l.shape} does not match problem ({prob.u_size}, {prob.x_size})"
        )
    report = kkt_check(prob, sol)
    for line in report.lines():
        print(line, file=out)
    return EXIT_OK if report.passed else EXIT_KKT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="localsecrecy", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("approx", help="solve the local program by alternating optimization")
    a.add_argument("file")
    a.add_argument("--out", help="write the solution as JSON")
    a.set_defaults(func=cmd_approx)

    e = sub.add_parser("exact", help="grid oracle for max I(X;Y) - I(X;Z)")
    e.add_argument("file")
    e.add_argument("--resolution", type=float, default=1e-3)
    e.set_defaults(func=cmd_exact)

    s = sub.add_parser("sweep-bsc", help="closed-form BSC curves as CSV")
    s.add_argument("--q", type=float, default=0.45)
    s.add_argument("--delta", type=float, default=0.085)
    s.add_argument("--epsilon", type=float, default=1e-3)
    s.add_argument("--rate", type=float, default=1.0, help="rate budget R; Theta = delta * R")
    s.add_argument("--pmin", type=float, default=0.01)
    s.add_argument("--pmax", type=float, default=0.44)
    s.add_argument("--steps", type=int, default=100)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep_bsc)

    k = sub.add_parser("kkt", help="check a saved solution against the KKT conditions")
    k.add_argument("file")
    k.add_argument("--solution", required=True)
    k.set_defaults(func=cmd_kkt)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (LocalSecrecyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
