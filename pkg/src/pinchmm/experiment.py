"""Parameter sweeps and the CSM/BSM timing benchmark, emitting CSV rows."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .envelope import NoFeasiblePosition
from .mm import SolveOptions, random_feasible_layout, run_single, solve
from .model import avg_snr, cas_layout, to_db
from .scenario import ScenarioGenSpec, generate_scenario

SWEEP_AXES = ("ptx_dbm", "alpha", "users", "pinch")
SOLVER_CHOICES = ("csm", "bsm", "both")

EXPERIMENT_COLUMNS = [
    "sweep_value", "trial", "solver", "min_snr_linear", "min_snr_db",
    "cas_min_snr_db", "iterations", "wall_time_s", "seed", "status",
]
BENCH_COLUMNS = [
    "num_pinch", "num_users", "csm_median_s", "bsm_median_s", "ratio",
    "csm_iterations", "bsm_iterations", "samples", "seed",
]
TIMING_COLUMNS = {"wall_time_s", "csm_median_s", "bsm_median_s", "ratio"}


@dataclass(frozen=True)
class ExperimentPlan:
    """One sweep axis over fresh random scenarios.

    ``rf`` holds scenario overrides accepted by ``build_config`` (e.g.
    ``ptx_dbm``, ``alpha``, ``num_pinch``); the swept axis overrides it.
    """

    axis: str
    values: tuple
    trials: int = 1
    solver: str = "both"
    seed: int = 0
    num_users: int = 5
    rect_width: float = 10.0
    rect_length: float = 40.0
    rf: dict = field(default_factory=dict)
    n_starts: int = 10
    conv_tol: float = 1e-6
    max_iters: int = 100
    workers: int = 1

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.solver not in SOLVER_CHOICES:
            raise ValueError(f"solver must be one of {SOLVER_CHOICES}, got {self.solver!r}")

    @property
    def solvers(self) -> tuple[str, ...]:
        return ("csm", "bsm") if self.solver == "both" else (self.solver,)


def trial_seed(seed: int, *key: int) -> int:
    """Independent, order-free integer seed for a trial."""
    return int(np.random.SeedSequence(seed, spawn_key=tuple(key)).generate_state(1)[0])


def _scenario(plan: ExperimentPlan, value, scen_seed: int):
    rf = dict(plan.rf)
    num_users = plan.num_users
    if plan.axis == "users":
        num_users = int(value)
    elif plan.axis == "pinch":
        rf["num_pinch"] = int(value)
    else:
        rf[plan.axis] = float(value)
    spec = ScenarioGenSpec(plan.rect_width, plan.rect_length, num_users, scen_seed)
    return generate_scenario(spec, **rf)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _run_point(plan: ExperimentPlan, value, trial: int) -> list[dict]:
    # same users across values on the power/blockage axes: the seed ignores the value
    scen_seed = trial_seed(plan.seed, trial)
    base = {"sweep_value": value, "trial": trial, "seed": scen_seed}
    try:
        cfg = _scenario(plan, value, scen_seed)
    except ValueError as exc:
        return [dict(base, solver=s, status=f"error: {exc}") for s in plan.solvers]
    try:
        cas_db = avg_snr(cas_layout(cfg), cfg).min_db
    except ValueError:
        cas_db = None
    rows = []
    for solver in plan.solvers:
        opts = SolveOptions(
            inner=solver, n_starts=plan.n_starts, seed=scen_seed,
            conv_tol=plan.conv_tol, max_iters=plan.max_iters,
        )
        t0 = time.perf_counter()
        try:
            rep = solve(cfg, opts)
        except (ValueError, NoFeasiblePosition) as exc:
            rows.append(dict(base, solver=solver, status=f"error: {exc}"))
            continue
        rows.append(dict(
            base,
            solver=solver,
            min_snr_linear=rep.best_objective,
            min_snr_db=float(to_db(rep.best_objective)),
            cas_min_snr_db=cas_db,
            iterations=rep.iterations[rep.best_start],
            wall_time_s=time.perf_counter() - t0,
            status="ok",
        ))
    return rows


def _run_point_packed(args):
    return _run_point(*args)


def run_experiment(plan: ExperimentPlan) -> list[dict]:
    """Rows ordered by (sweep value, trial, solver) regardless of ``workers``."""
    tasks = [(plan, v, t) for v in plan.values for t in range(plan.trials)]
    if plan.workers > 1:
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            chunks = list(pool.map(_run_point_packed, tasks))
    else:
        chunks = [_run_point(*t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def run_benchmark(
    pinch: list[int],
    users: list[int],
    seed: int,
    reps: int = 10,
    instances: int = 3,
    rf: dict | None = None,
    conv_tol: float = 1e-6,
    max_iters: int = 100,
) -> list[dict]:
    """Median per-iteration inner-solver time of CSM and BSM.

    For every (P, U) pair, ``instances`` random scenarios and starts are drawn
    and each is solved ``reps`` times by both solvers from the same start.
    Only the inner-solver calls are timed (see ``StartResult``).
    """
    if reps < 1 or instances < 1:
        raise ValueError("reps and instances must be >= 1")
    rf = dict(rf or {})
    rows = []
    for P in pinch:
        for U in users:
            times = {"csm": [], "bsm": []}
            iters = {"csm": [], "bsm": []}
            cases = []
            for i in range(instances):
                s = trial_seed(seed, P, U, i)
                cfg = generate_scenario(ScenarioGenSpec(num_users=U, seed=s), **{**rf, "num_pinch": P})
                start = random_feasible_layout(cfg, np.random.default_rng(s))
                cases.append((cfg, start))
            for _ in range(reps):
                for cfg, start in cases:
                    for inner in ("csm", "bsm"):
                        opts = SolveOptions(inner=inner, conv_tol=conv_tol, max_iters=max_iters)
                        res = run_single(start, cfg, opts)
                        times[inner].extend(res.inner_times)
                        iters[inner].append(res.iterations)
            c, b = float(np.median(times["csm"])), float(np.median(times["bsm"]))
            rows.append(dict(
                num_pinch=P, num_users=U, csm_median_s=c, bsm_median_s=b,
                ratio=c / b if b > 0 else math.inf,
                csm_iterations=float(np.median(iters["csm"])),
                bsm_iterations=float(np.median(iters["bsm"])),
                samples=len(times["csm"]), seed=seed,
            ))
    return rows


def fit_exponent(sizes, times) -> float:
    """Slope of ``log(time)`` against ``log(size)``."""
    return float(np.polyfit(np.log(sizes), np.log(times), 1)[0])


def rows_to_csv(rows: list[dict], columns: list[str], drop_timing: bool = False) -> str:
    cols = [c for c in columns if not (drop_timing and c in TIMING_COLUMNS)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow(["" if row.get(c) is None else _fmt(row.get(c)) for c in cols])
    return buf.getvalue()
