"""Command-line front end.

    mpr gen kg --k 4 --d 1 --n 8 --seed 7 -o code.mat
    mpr verify kg code.mat --k 4 --d 1
    mpr simulate code.mat --active 1,2,3 --d 1
    mpr bounds tsel --k 4 --m 2 --d 1 --n 16
    mpr sweep --measurement construction_length --k 16 --d 1,2,4,8 --n 256

Exit codes: 0 pass, 1 property failure, 2 usage or cap error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

import numpy as np

from . import bounds as B
from .channel import residual_active, simulate, staged_simulate, trace_to_csv
from .construct import (
    DEFAULT_EPS,
    GENERATOR,
    build_kg,
    derive_seed,
    gen_selector_with_attempts,
)
from .core import KGParams, MatrixFormatError, SelectorParams, dumps_matrix, read_matrix
from .verify import (
    CapExceeded,
    check_caps,
    is_kg_sim,
    is_locally_thin_exact,
    is_locally_thin_leq,
    is_selector,
)

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

MEASUREMENTS = ("construction_length", "resolution_slots", "residual_actives", "gen_attempts")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n for n in missing))


# gen ------------------------------------------------------------------------

def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(32)
    if args.what == "kg":
        _require(args, "k", "n")
        code = build_kg(KGParams(args.k, args.d, args.n), args.eps, seed, args.mode,
                        workers=args.workers)
        matrix, sidecar = code.matrix, code.sidecar()
    else:
        _require(args, "k", "m", "n")
        P = SelectorParams(args.k, args.m, args.d, args.n)
        matrix, _ = gen_selector_with_attempts(P, args.eps, seed, args.mode, workers=args.workers)
        sidecar = {
            "k": P.k, "m": P.m, "d": P.d, "n": P.n, "eps": args.eps, "seed": seed,
            "mode": args.mode, "plan": [{"k": P.k, "m": P.m, "d_eff": P.d, "t": matrix.t}],
            "generator": GENERATOR,
        }
    side = json.dumps(sidecar, sort_keys=True)
    if args.output:
        with open(args.output, "w") as f:
            f.write(dumps_matrix(matrix))
        with open(args.output + ".json", "w") as f:
            f.write(side + "\n")
    else:
        sys.stdout.write(dumps_matrix(matrix, ["sidecar " + side]))
    return EXIT_PASS


# verify ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    _require(args, "k")
    n = args.n
    M = None
    if n is None:
        if args.matrix is None:
            raise UsageError("a matrix file (or --n) is required")
        M = read_matrix(args.matrix)
        n = M.n
    sizes = list(range(args.d, args.k + 1)) if args.property == "lt-leq" else [args.k]
    check_caps(n, sizes, args.force)
    if M is None:
        if args.matrix is None:
            raise UsageError("a matrix file is required")
        M = read_matrix(args.matrix)
    if args.n is not None and args.n != M.n:
        raise UsageError(f"--n {args.n} does not match matrix with {M.n} columns")
    kw = dict(workers=args.workers, force=args.force)
    if args.property == "selector":
        _require(args, "m")
        report = is_selector(M, SelectorParams(args.k, args.m, args.d, M.n), **kw)
    else:
        P = KGParams(args.k, args.d, M.n)
        fn = {"kg": is_kg_sim, "lt-leq": is_locally_thin_leq, "lt-exact": is_locally_thin_exact}
        report = fn[args.property](M, P, **kw)
    print(report.to_json())
    return EXIT_PASS if report.passed else EXIT_FAIL


# simulate -------------------------------------------------------------------

def cmd_simulate(args) -> int:
    mats = [read_matrix(p) for p in args.matrix]
    try:
        active = [int(x) for x in args.active.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--active must be a comma-separated list of stations, got {args.active!r}")
    if len(mats) == 1:
        trace = simulate(mats[0], active, args.d)
    else:
        trace = staged_simulate(mats, active, args.d)
    sys.stdout.write(trace_to_csv(trace))
    used = trace.slots_used
    print(f"resolved={str(trace.resolved).lower()} slots_used={used if used is not None else 'n/a'}",
          file=sys.stderr)
    return EXIT_PASS if trace.resolved else EXIT_FAIL


# bounds ---------------------------------------------------------------------

def cmd_bounds(args) -> int:
    out = []
    if args.which == "all":
        which = ["tkg", "tlt-leq", "tlt-exact"]
        if args.m is not None:
            which = ["tsel"] + which + ["claim1"]
    else:
        which = [args.which]
    for w in which:
        if w == "tsel":
            _require(args, "k", "m", "n")
            out.append(B.tsel_upper(SelectorParams(args.k, args.m, args.d, args.n)).to_dict())
        elif w == "tkg":
            _require(args, "k", "n")
            out.append(B.tkg_upper_explicit(KGParams(args.k, args.d, args.n), args.eps).to_dict())
        elif w == "tlt-leq":
            _require(args, "k", "n")
            out.append(B.tlt_lower_leq(KGParams(args.k, args.d, args.n)).to_dict())
        elif w == "tlt-exact":
            _require(args, "k", "n")
            out.append(B.tlt_lower_exact(KGParams(args.k, args.d, args.n)).to_dict())
        elif w == "claim1":
            _require(args, "k", "m")
            p = B.prescribed_p(args.k, args.d)
            exact = B.p1p2(args.k, args.m, args.d, p)
            out.append({"name": "claim1_rate", "p": p,
                        "closed_form": B.claim1_rate(args.k, args.m, args.d),
                        "exact_log_rate": exact.log_rate})
        elif w == "p1p2":
            _require(args, "k", "m", "p")
            r = B.p1p2(args.k, args.m, args.d, args.p)
            out.append({"name": "p1p2", "P1": r.P1, "P2": r.P2, "log_rate": r.log_rate})
    for obj in out:
        print(json.dumps(obj))
    return EXIT_PASS


# sweep ----------------------------------------------------------------------

def _sweep_cell(job):
    """All trials of one grid cell; returns a list of CSV rows."""
    measurement, k, d, n, eps, m_opt, trials, seed, cell, mode = job
    rows = []
    for trial in range(trials):
        tseed = derive_seed(seed, cell, trial)
        rng = np.random.default_rng(tseed)
        if measurement == "construction_length":
            value = build_kg(KGParams(k, d, n), eps, tseed, mode).matrix.t
        elif measurement == "resolution_slots":
            code = build_kg(KGParams(k, d, n), eps, tseed, mode)
            S = (rng.choice(n, size=k, replace=False) + 1).tolist()
            tr = simulate(code.matrix, S, d)
            value = tr.slots_used if tr.resolved else "nan"
        else:
            m = m_opt if m_opt is not None else -(-k // 2)
            P = SelectorParams(k, m, min(d, m), n)
            M, attempts = gen_selector_with_attempts(P, eps, tseed, "verified")
            if measurement == "gen_attempts":
                value = attempts
            else:
                S = (rng.choice(n, size=k, replace=False) + 1).tolist()
                value = len(residual_active(M, S, d))
        rows.append([k, d, n, eps, trial, measurement, value])
    return rows


def cmd_sweep(args) -> int:
    seed = args.seed if args.seed is not None else secrets.randbits(32)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    jobs = []
    for cell, (k, d, n, eps) in enumerate(product(args.k, args.d, args.n, args.eps)):
        if not 1 <= d <= k <= n:
            print(f"skipping illegal cell k={k} d={d} n={n}", file=sys.stderr)
            continue
        needs_check = args.measurement in ("residual_actives", "gen_attempts") or args.mode == "verified"
        if needs_check:
            check_caps(n, [k], args.force)
        jobs.append((args.measurement, k, d, n, eps, args.m, args.trials, seed, cell, args.mode))
    if not jobs:
        raise UsageError("empty parameter grid")
    if args.workers and args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            results = list(ex.map(_sweep_cell, jobs))
    else:
        results = [_sweep_cell(j) for j in jobs]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "d", "n", "eps", "trial", "measurement", "value"])
    for rows in results:
        w.writerows(rows)
    sys.stdout.write(buf.getvalue())
    if args.seed is None:
        print(f"seed={seed}", file=sys.stderr)
    return EXIT_PASS


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpr", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a KG code or a selector")
    g.add_argument("what", choices=["kg", "selector"])
    g.add_argument("--k", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--n", type=int)
    g.add_argument("--eps", type=float, default=DEFAULT_EPS)
    g.add_argument("--seed", type=int)
    g.add_argument("--mode", choices=["verified", "whp"], default="verified")
    g.add_argument("--workers", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check a matrix file against a property")
    v.add_argument("property", choices=["kg", "selector", "lt-leq", "lt-exact"])
    v.add_argument("matrix", nargs="?")
    v.add_argument("--k", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--d", type=int, default=1)
    v.add_argument("--n", type=int)
    v.add_argument("--workers", type=int)
    v.add_argument("--force", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="run the channel on a schedule; several files run as stages")
    s.add_argument("matrix", nargs="+")
    s.add_argument("--active", required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bounds", help="evaluate closed-form bounds")
    b.add_argument("which", choices=["tsel", "tkg", "tlt-leq", "tlt-exact", "claim1", "p1p2", "all"])
    b.add_argument("--k", type=int)
    b.add_argument("--m", type=int)
    b.add_argument("--d", type=int, default=1)
    b.add_argument("--n", type=int)
    b.add_argument("--eps", type=float, default=DEFAULT_EPS)
    b.add_argument("--p", type=float)
    b.set_defaults(func=cmd_bounds)

    w = sub.add_parser("sweep", help="Monte Carlo sweep over a parameter grid, CSV out")
    w.add_argument("--measurement", choices=MEASUREMENTS, required=True)
    w.add_argument("--k", type=_int_list, required=True)
    w.add_argument("--d", type=_int_list, default=[1])
    w.add_argument("--n", type=_int_list, required=True)
    w.add_argument("--eps", type=_float_list, default=[DEFAULT_EPS])
    w.add_argument("--m", type=int)
    w.add_argument("--trials", type=int, default=1)
    w.add_argument("--seed", type=int)
    w.add_argument("--mode", choices=["verified", "whp"], default="whp")
    w.add_argument("--workers", type=int)
    w.add_argument("--force", action="store_true")
    w.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CapExceeded, MatrixFormatError, ValueError, OSError, RuntimeError) as e:
        print(f"mpr: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
