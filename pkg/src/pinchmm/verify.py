"""Fast self-check suite behind ``pinchmm oracle``.

Each check compares a solver path against an independent oracle on a handful
of random scenarios and yields ``(name, passed, detail)``.
"""

from __future__ import annotations

import numpy as np

from . import bsm, csm
from .envelope import coordinate_problem
from .intervals import region_for
from .mm import SolveOptions, random_feasible_layout, solve
from .model import snr_matrix
from .oracle import finite_diff_gradient, grid_search_envelope, monte_carlo_received_power
from .scenario import ScenarioGenSpec, generate_scenario
from .surrogate import build, eval_L, grad_L, minorizer_gap


def random_scenario(rng: np.random.Generator, max_users=8, max_pinch=6, **rf):
    U = int(rng.integers(1, max_users + 1))
    P = int(rng.integers(1, max_pinch + 1))
    rf.setdefault("alpha", float(rng.choice([0.0, 0.001, 0.01, 0.1])))
    rf.setdefault("ptx_dbm", float(rng.uniform(30, 50)))
    spec = ScenarioGenSpec(num_users=U, seed=int(rng.integers(2**31)))
    return generate_scenario(spec, num_pinch=P, **rf)


def random_instance(rng: np.random.Generator, max_users=10, max_pinch=6):
    """Per-coordinate subproblem from a random scenario and anchor."""
    cfg = random_scenario(rng, max_users=max_users, max_pinch=max_pinch)
    x = random_feasible_layout(cfg, rng).array
    model = build(x, cfg)
    p = int(rng.integers(cfg.num_pinch))
    return coordinate_problem(model, x, p), region_for(p, x, cfg), x[p]


def check_minorizer(scenarios=10, layouts=1000, seed=0):
    rng = np.random.default_rng(seed)
    worst_gap, worst_tan = np.inf, 0.0
    for _ in range(scenarios):
        cfg = random_scenario(rng)
        anchor = random_feasible_layout(cfg, rng)
        model = build(anchor, cfg)
        xs = rng.uniform(cfg.D1, cfg.D2, size=(layouts, cfg.num_pinch))
        worst_gap = min(worst_gap, float(minorizer_gap(model, xs, cfg).min()))
        s = snr_matrix(anchor.array, cfg)
        worst_tan = max(worst_tan, float(np.max(np.abs(eval_L(model, anchor) - s) / s)))
    ok = worst_gap >= -1e-12 and worst_tan <= 1e-10
    return "minorizer", ok, f"min(S-L)={worst_gap:.3g}, tangency rel err={worst_tan:.3g}"


def check_gradient(anchors=20, seed=1):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(anchors):
        cfg = random_scenario(rng)
        x = random_feasible_layout(cfg, rng).array
        model = build(x, cfg)
        fd = finite_diff_gradient(lambda z: snr_matrix(z, cfg), x, 1e-6)
        an = grad_L(model, x)
        worst = max(worst, float(np.max(np.abs(fd - an)) / np.max(np.abs(an))))
    return "tangent gradient", worst <= 1e-5, f"max rel err={worst:.3g}"


def check_inner(instances=50, seed=2, spacing=1e-3):
    rng = np.random.default_rng(seed)
    worst_grid, worst_pair = np.inf, 0.0
    for _ in range(instances):
        par, region, cur = random_instance(rng)
        _, v_c = csm.maximize_on_region(par, region)
        _, v_g = grid_search_envelope(par, region, spacing)
        res = bsm.maximize_on_region(par, region, current=cur)
        worst_grid = min(worst_grid, (v_c - v_g) / max(abs(v_c), 1e-300))
        tol = max(10 * bsm.default_tau(res.s_max), 1e-8 * abs(v_c))
        worst_pair = max(worst_pair, abs(res.value - v_c) / tol)
    ok = worst_grid >= -1e-6 and worst_pair <= 1.0
    return "inner solvers", ok, f"CSM-grid rel={worst_grid:.3g}, |BSM-CSM|/tol={worst_pair:.3g}"


def check_ascent(solves=10, seed=3):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(solves):
        cfg = random_scenario(rng, max_users=6, max_pinch=4)
        for inner in ("csm", "bsm"):
            rep = solve(cfg, SolveOptions(inner=inner, n_starts=2, seed=k))
            for tr in rep.trajectories:
                tr = np.asarray(tr)
                worst = max(worst, float(np.max((tr[:-1] - tr[1:]) / tr[:-1], initial=0.0)))
    return "MM ascent", worst <= 1e-9, f"max relative drop={worst:.3g}"


def check_monte_carlo(scenarios=3, samples=200_000, seed=4):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(scenarios):
        cfg = random_scenario(rng, max_users=5, max_pinch=3, alpha=0.01)
        x = random_feasible_layout(cfg, rng).array
        mean, se = monte_carlo_received_power(x, cfg, samples, rng)
        worst = max(worst, float(np.max(np.abs(mean - snr_matrix(x, cfg)) / se)))
    return "Monte Carlo mean SNR", worst <= 4.0, f"max |MC-formula|/SE={worst:.3g}"


CHECKS = (check_minorizer, check_gradient, check_inner, check_ascent, check_monte_carlo)


def run_all(seed: int = 0):
    for k, check in enumerate(CHECKS):
        yield check(seed=seed * 100 + k)
