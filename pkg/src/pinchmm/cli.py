"""Command line entry point: ``pinchmm {gen,solve,sweep,bench,oracle}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import verify
from .envelope import NoFeasiblePosition
from .experiment import (
    BENCH_COLUMNS, EXPERIMENT_COLUMNS, SOLVER_CHOICES, SWEEP_AXES,
    ExperimentPlan, fit_exponent, rows_to_csv, run_benchmark, run_experiment,
)
from .mm import SolveOptions, solve
from .model import avg_snr, cas_layout
from .scenario import ScenarioGenSpec, format_config, generate_scenario, load_config

RF_FLAGS = ("D1", "D2", "delta", "t", "fc", "ptx_dbm", "sigma2_dbm", "alpha", "n_eff", "feed_x")


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _add_rf(p):
    g = p.add_argument_group("scenario overrides")
    g.add_argument("--D1", type=float)
    g.add_argument("--D2", type=float)
    g.add_argument("--delta", type=float, help="minimum antenna spacing (m), default lambda/2")
    g.add_argument("--t", type=float, help="waveguide height (m)")
    g.add_argument("--fc", type=float, help="carrier frequency (Hz)")
    g.add_argument("--ptx-dbm", dest="ptx_dbm", type=float)
    g.add_argument("--sigma2-dbm", dest="sigma2_dbm", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--n-eff", dest="n_eff", type=float)
    g.add_argument("--feed-x", dest="feed_x", type=float)
    g.add_argument("--pinch", dest="num_pinch", type=int, help="number of antennas P")


def _add_solver(p):
    p.add_argument("--starts", type=int, default=10, help="multi-start count N")
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-6, help="relative objective change to stop")


def _rf(args) -> dict:
    out = {k: getattr(args, k) for k in RF_FLAGS + ("num_pinch",)}
    return {k: v for k, v in out.items() if v is not None}


def _write(text: str, path):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_gen(args):
    spec = ScenarioGenSpec(args.width, args.length, args.users, args.seed)
    cfg = generate_scenario(spec, **_rf(args))
    _write(format_config(cfg), args.output)
    return 0


def cmd_solve(args):
    if args.config:
        cfg = load_config(args.config, **_rf(args))
    else:
        spec = ScenarioGenSpec(args.width, args.length, args.users, args.seed)
        cfg = generate_scenario(spec, **_rf(args))
    opts = SolveOptions(
        inner=args.inner, n_starts=args.starts, seed=args.seed, conv_tol=args.tol,
        max_iters=args.max_iters, sweep=args.sweep, workers=args.workers,
    )
    rep = solve(cfg, opts)
    ev = avg_snr(rep.best_layout, cfg)
    print(f"solver          {rep.inner_used}")
    print(f"min SNR         {ev.min_value:.10g} ({ev.min_db:.4f} dB), worst user {ev.argmin_user}")
    try:
        print(f"CAS min SNR     {avg_snr(cas_layout(cfg), cfg).min_db:.4f} dB")
    except ValueError as exc:
        print(f"CAS min SNR     n/a ({exc})")
    print(f"best start      {rep.best_start} after {rep.iterations[rep.best_start]} iterations")
    print("positions (m)   " + ", ".join(f"{x:.6f}" for x in sorted(rep.best_layout.xs)))
    if args.trajectory:
        for k, tr in enumerate(rep.trajectories):
            print(f"start {k}: " + " ".join(f"{v:.8g}" for v in tr))
    return 0


def cmd_sweep(args):
    values = _ints(args.values) if args.axis in ("users", "pinch") else _floats(args.values)
    plan = ExperimentPlan(
        axis=args.axis, values=tuple(values), trials=args.trials, solver=args.solver,
        seed=args.seed, num_users=args.users, rect_width=args.width, rect_length=args.length,
        rf=_rf(args), n_starts=args.starts, conv_tol=args.tol, max_iters=args.max_iters,
        workers=args.workers,
    )
    rows = run_experiment(plan)
    _write(rows_to_csv(rows, EXPERIMENT_COLUMNS), args.output)
    errors = [r for r in rows if r["status"] != "ok"]
    for r in errors:
        print(f"trial {r['trial']} at {r['sweep_value']}: {r['status']}", file=sys.stderr)
    return 1 if (errors and args.strict) else 0


def cmd_bench(args):
    rows = run_benchmark(
        _ints(args.pinch_list), _ints(args.users_list), seed=args.seed, reps=args.reps,
        instances=args.instances, rf=_rf(args), conv_tol=args.tol, max_iters=args.max_iters,
    )
    _write(rows_to_csv(rows, BENCH_COLUMNS), args.output)
    for P in sorted({r["num_pinch"] for r in rows}):
        sub = [r for r in rows if r["num_pinch"] == P]
        if len(sub) >= 2:
            e = fit_exponent([r["num_users"] for r in sub], [r["csm_median_s"] for r in sub])
            print(f"P={P}: CSM time ~ U^{e:.2f}", file=sys.stderr)
    return 0


def cmd_oracle(args):
    failed = 0
    for name, ok, detail in verify.run_all(args.seed):
        print(f"{'PASS' if ok else 'FAIL'}  {name:24s} {detail}")
        failed += not ok
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pinchmm", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def area(p):
        p.add_argument("--users", type=int, default=5, help="number of users U")
        p.add_argument("--width", type=float, default=10.0, help="service area y-extent (m)")
        p.add_argument("--length", type=float, default=40.0, help="service area x-extent (m)")

    p = sub.add_parser("gen", help="write a random scenario file")
    area(p)
    _add_rf(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="optimise antenna positions for one scenario")
    p.add_argument("config", nargs="?", help="scenario file; a random one is drawn if omitted")
    area(p)
    _add_rf(p)
    _add_solver(p)
    p.add_argument("--inner", choices=("csm", "bsm"), default="csm")
    p.add_argument("--sweep", choices=("gauss-seidel", "jacobi"), default="gauss-seidel")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--trajectory", action="store_true", help="print per-start objective traces")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="sweep one parameter and emit CSV")
    area(p)
    _add_rf(p)
    _add_solver(p)
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", required=True, help="comma separated sweep values")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--solver", choices=SOLVER_CHOICES, default="both")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--strict", action="store_true", help="nonzero exit if any row failed")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="time CSM against BSM")
    _add_rf(p)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--pinch-list", default="8")
    p.add_argument("--users-list", default="5,10,15,20,25")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--instances", type=int, default=3)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="run the quick verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, NoFeasiblePosition, OSError) as exc:
        print(f"pinchmm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
