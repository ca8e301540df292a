"""Independent reference computations used to check the solvers.

Nothing here shares code paths with the solvers beyond the objective itself:
grids are dense numpy evaluations, gradients are central differences, and the
mean-SNR formula is checked against a simulated random channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelope import NoFeasiblePosition, Parabolas, coordinate_problem
from .intervals import IntervalSet
from .model import PinchLayout, ScenarioConfig, _coords, channel_matrix, min_snr, sq_distance


@dataclass(frozen=True)
class GridSpec:
    spacing: float
    bounds: IntervalSet

    def __post_init__(self):
        if self.spacing <= 0:
            raise ValueError("grid spacing must be positive")

    def points(self) -> np.ndarray:
        return grid_points(self.bounds, self.spacing)


def grid_points(region: IntervalSet, spacing: float) -> np.ndarray:
    """Regular grid on every interval, endpoints always included."""
    chunks = []
    for a, b in region:
        n = int(np.floor((b - a) / spacing))
        pts = a + spacing * np.arange(n + 1)
        chunks.append(pts[pts < b])
        chunks.append(np.array([b]))
    return np.concatenate(chunks) if chunks else np.empty(0)


def grid_search_envelope(par: Parabolas, region: IntervalSet, spacing: float) -> tuple[float, float]:
    if region.is_empty:
        raise NoFeasiblePosition("feasible region is empty")
    xs = grid_points(region, spacing)
    vals = np.empty_like(xs)
    for i in range(0, xs.size, 50_000):
        vals[i : i + 50_000] = par.envelope_array(xs[i : i + 50_000])
    k = int(np.argmax(vals))
    return float(xs[k]), float(vals[k])


def grid_search_coordinate(p, model, layout, region: IntervalSet, spacing: float):
    return grid_search_envelope(coordinate_problem(model, layout, p), region, spacing)


def grid_search_full(cfg: ScenarioConfig, spacing: float) -> tuple[PinchLayout, float]:
    """Brute-force maximum of the true worst-user SNR over a grid (P <= 2)."""
    if cfg.num_pinch > 2:
        raise ValueError("full grid search is limited to P <= 2")
    xs = grid_points(IntervalSet(((cfg.D1, cfg.D2),)), spacing)
    F = cfg.rho_prime * np.exp(-cfg.alpha * sq_distance(xs, cfg)) / sq_distance(xs, cfg)  # (n, U)
    if cfg.num_pinch == 1:
        vals = F.min(axis=1)
        k = int(np.argmax(vals))
        return PinchLayout((xs[k],)), float(vals[k])
    # x1 < x2 by symmetry; rows processed in blocks to bound memory
    best_val, best = -np.inf, None
    block = max(1, 4_000_000 // (xs.size * F.shape[1]))
    for i0 in range(0, xs.size, block):
        rows = slice(i0, min(i0 + block, xs.size))
        env = (F[rows, None, :] + F[None, :, :]).min(axis=2)
        gap = xs[None, :] - xs[rows, None]
        env[gap < cfg.delta] = -np.inf
        k = np.unravel_index(int(np.argmax(env)), env.shape)
        if env[k] > best_val:
            best_val, best = float(env[k]), (float(xs[rows][k[0]]), float(xs[k[1]]))
    if best is None:
        raise NoFeasiblePosition("no feasible grid layout")
    return PinchLayout(best), best_val


def monte_carlo_received_power(
    layout,
    cfg: ScenarioConfig,
    n_samples: int,
    rng: np.random.Generator,
    chunk: int = 100_000,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and standard error of the received SNR for every user.

    Each draw blocks the (u, p) link with probability ``1 - exp(-alpha d^2)``
    and rotates it by an independent uniform phase, then adds the antenna
    contributions coherently.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    xs = _coords(layout)
    h = channel_matrix(xs, cfg)  # (U, P)
    p_los = np.exp(-cfg.alpha * sq_distance(xs, cfg)).T
    scale = cfg.ptx / (cfg.num_pinch * cfg.sigma2)
    # chunk means and squared deviations merged with Chan's update
    mean = np.zeros(cfg.num_users)
    m2 = np.zeros(cfg.num_users)
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        los = rng.random((n,) + h.shape) < p_los
        phase = np.exp(2j * np.pi * rng.random((n,) + h.shape))
        y = np.abs((los * h * phase).sum(axis=2)) ** 2 * scale
        cm = y.mean(axis=0)
        d = cm - mean
        tot = done + n
        mean = mean + d * (n / tot)
        m2 = m2 + ((y - cm) ** 2).sum(axis=0) + d * d * (done * n / tot)
        done = tot
    stderr = np.sqrt(m2 / max(n_samples - 1, 1) / n_samples)
    return mean, stderr


def finite_diff_gradient(fn, at, step: float = 1e-6) -> np.ndarray:
    """Central differences of ``fn`` at ``at``; ``fn`` may be vector-valued,
    giving an array of shape ``fn(at).shape + (P,)``."""
    if step <= 0:
        raise ValueError("step must be positive")
    x = _coords(at).astype(float)
    cols = []
    for p in range(x.size):
        e = np.zeros_like(x)
        e[p] = step
        cols.append((np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2.0 * step))
    return np.stack(cols, axis=-1)


def true_objective(cfg: ScenarioConfig):
    return lambda xs: min_snr(xs, cfg)
