"""Multi-start minorization-maximization driver.

Each outer iteration freezes a tangent minorizer at the current layout and
sweeps the antennas one at a time, maximising the worst user's surrogate over
that antenna's feasible region with either inner solver.  Because the
surrogate touches the true objective at the anchor and lies below it
everywhere, the true worst-user SNR never decreases.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bsm, csm
from .envelope import NoFeasiblePosition, coordinate_problem
from .intervals import region_for
from .model import PinchLayout, ScenarioConfig, cas_layout, min_snr
from .surrogate import build, eval_L

log = logging.getLogger(__name__)

INNER_SOLVERS = ("csm", "bsm")
SWEEPS = ("gauss-seidel", "jacobi")


@dataclass(frozen=True)
class SolveOptions:
    inner: str = "csm"
    max_iters: int = 100
    conv_tol: float = 1e-6
    n_starts: int = 10
    seed: int = 0
    sweep: str = "gauss-seidel"
    cas_start: bool = True
    tau: float | None = None
    workers: int = 1

    def __post_init__(self):
        if self.inner not in INNER_SOLVERS:
            raise ValueError(f"inner must be one of {INNER_SOLVERS}, got {self.inner!r}")
        if self.sweep not in SWEEPS:
            raise ValueError(f"sweep must be one of {SWEEPS}, got {self.sweep!r}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.conv_tol <= 0:
            raise ValueError("conv_tol must be positive")
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")


@dataclass
class StartResult:
    start: PinchLayout
    layout: PinchLayout
    trajectory: list[float]
    # seconds per iteration: inner-solver calls only, surrogate build, and the
    # per-coordinate region / constant-term assembly shared by both solvers
    inner_times: list[float] = field(default_factory=list)
    build_times: list[float] = field(default_factory=list)
    setup_times: list[float] = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.trajectory) - 1

    @property
    def objective(self) -> float:
        return self.trajectory[-1]


@dataclass
class SolveReport:
    """Outcome of a multi-start solve.

    ``trajectories[k][0]`` is start ``k``'s initial objective and each later
    entry is the true worst-user SNR after one MM iteration.
    """

    best_layout: PinchLayout
    best_objective: float
    best_start: int
    inner_used: str
    starts: list[StartResult] = field(repr=False)

    @property
    def trajectories(self) -> list[list[float]]:
        return [s.trajectory for s in self.starts]

    @property
    def iterations(self) -> list[int]:
        return [s.iterations for s in self.starts]

    @property
    def timings(self) -> list[list[float]]:
        """Per-start, per-iteration wall-clock seconds of a whole MM iteration."""
        return [
            [b + u + i for b, u, i in zip(s.build_times, s.setup_times, s.inner_times)]
            for s in self.starts
        ]

    @property
    def inner_times(self) -> list[list[float]]:
        return [s.inner_times for s in self.starts]


def random_feasible_layout(cfg: ScenarioConfig, rng: np.random.Generator) -> PinchLayout:
    """Uniform draw from the sorted feasible layouts.

    ``P`` uniform points on ``[0, slack]`` are sorted and the k-th is shifted by
    ``k * delta``; the map is a volume-preserving bijection onto the sorted
    feasible set.
    """
    P = cfg.num_pinch
    slack = (cfg.D2 - cfg.D1) - (P - 1) * cfg.delta
    if slack < 0:
        raise ValueError("antennas do not fit on the waveguide")
    y = np.sort(rng.uniform(0.0, slack, size=P))
    xs = np.minimum(cfg.D1 + y + cfg.delta * np.arange(P), cfg.D2)
    return PinchLayout(xs)


def _solve_coordinate(inner, par, region, current, tau):
    if inner == "csm":
        return csm.maximize_on_region(par, region, current=current)[0]
    return bsm.maximize_on_region(par, region, tau=tau, current=current).x


def _sweep_gauss_seidel(model, x, cfg, opts, clock):
    for p in range(cfg.num_pinch):
        region = region_for(p, x, cfg)
        if region.is_empty:
            raise NoFeasiblePosition(
                f"antenna {p} has no admissible position given {x.tolist()}; "
                "the anchor was feasible so this indicates a bug"
            )
        par = coordinate_problem(model, x, p)
        t0 = time.perf_counter()
        x[p] = _solve_coordinate(opts.inner, par, region, x[p], opts.tau)
        clock[0] += time.perf_counter() - t0
    return x


def _sweep_jacobi(model, x, cfg, opts, clock):
    new = x.copy()
    for p in range(cfg.num_pinch):
        region = region_for(p, x, cfg)
        if region.is_empty:
            raise NoFeasiblePosition(f"antenna {p} has no admissible position")
        par = coordinate_problem(model, x, p)
        t0 = time.perf_counter()
        new[p] = _solve_coordinate(opts.inner, par, region, x[p], opts.tau)
        clock[0] += time.perf_counter() - t0
    # simultaneous moves can collide or lose surrogate ascent
    if PinchLayout(new).is_feasible(cfg) and eval_L(model, new).min() >= eval_L(model, x).min():
        return new
    return _sweep_gauss_seidel(model, x, cfg, opts, clock)


def run_single(start, cfg: ScenarioConfig, opts: SolveOptions) -> StartResult:
    start = PinchLayout(start).check(cfg)
    x = start.array
    f = float(min_snr(x, cfg))
    res = StartResult(start=start, layout=start, trajectory=[f])
    sweep = _sweep_gauss_seidel if opts.sweep == "gauss-seidel" else _sweep_jacobi
    for _ in range(opts.max_iters):
        t0 = time.perf_counter()
        model = build(x, cfg, check=False)
        t1 = time.perf_counter()
        clock = [0.0]
        x = sweep(model, x, cfg, opts, clock)
        t2 = time.perf_counter()
        res.build_times.append(t1 - t0)
        res.inner_times.append(clock[0])
        res.setup_times.append(t2 - t1 - clock[0])
        f_new = float(min_snr(x, cfg))
        res.trajectory.append(f_new)
        if f_new < f * (1.0 - 1e-9):
            log.warning("objective decreased from %r to %r", f, f_new)
        done = abs(f_new - f) < opts.conv_tol * abs(f)
        f = f_new
        if done:
            res.converged = True
            break
    res.layout = PinchLayout(x)
    return res


def start_layouts(cfg: ScenarioConfig, opts: SolveOptions) -> list[PinchLayout]:
    """Deterministic start list: CAS first (when admissible), then seeded random draws.

    Start ``k`` draws from its own substream of ``opts.seed`` so the list does
    not depend on execution order.
    """
    starts = []
    if opts.cas_start:
        try:
            starts.append(cas_layout(cfg))
        except ValueError:
            log.info("CAS layout infeasible for this scenario; using random starts only")
    k = 0
    while len(starts) < opts.n_starts:
        rng = np.random.default_rng(np.random.SeedSequence(opts.seed, spawn_key=(k,)))
        starts.append(random_feasible_layout(cfg, rng))
        k += 1
    return starts


def _run_packed(args):
    return run_single(*args)


def solve(cfg: ScenarioConfig, opts: SolveOptions | None = None) -> SolveReport:
    opts = opts or SolveOptions()
    starts = start_layouts(cfg, opts)
    if opts.workers > 1 and len(starts) > 1:
        with ProcessPoolExecutor(max_workers=opts.workers) as pool:
            results = list(pool.map(_run_packed, [(s, cfg, opts) for s in starts]))
    else:
        results = [run_single(s, cfg, opts) for s in starts]
    best = max(range(len(results)), key=lambda k: (results[k].objective, -k))
    return SolveReport(
        best_layout=results[best].layout,
        best_objective=results[best].objective,
        best_start=best,
        inner_used=opts.inner,
        starts=results,
    )
