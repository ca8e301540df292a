"""Bisection on the epigraph level of the parabola envelope.

For a level ``s`` each constraint ``h_u(x) >= s`` is the window
``|x - center_u| <= Q_u(s)``; the level is achievable on the region iff the
intersection of all windows meets some interval of the region.  Each test
costs O(U + M), and the number of tests is logarithmic in the level range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .envelope import NoFeasiblePosition, Parabolas, coordinate_problem
from .intervals import IntervalSet

REL_TAU = 1e-9


@dataclass(frozen=True)
class LevelWindow:
    lo: float
    hi: float
    empty: bool


@dataclass(frozen=True)
class BisectionResult:
    level: float
    x: float
    value: float
    iterations: int
    s_max: float


def default_tau(s_max: float) -> float:
    return REL_TAU * max(1.0, abs(s_max))


def q_radius(u: int, s: float, par: Parabolas) -> float | None:
    """Half-width of user ``u``'s window at level ``s``; ``None`` when ``s`` is above its peak."""
    slack = par.height[u] - s
    if slack < 0.0:
        return None
    c = par.curv[u]
    if c == 0.0:
        return math.inf
    return math.sqrt(slack / c)


def window(s: float, par: Parabolas) -> LevelWindow:
    lo, hi = -math.inf, math.inf
    for h, c, m in zip(par.height, par.curv, par.center):
        slack = h - s
        if slack < 0.0:
            return LevelWindow(lo, hi, True)
        if c == 0.0:
            continue
        r = math.sqrt(slack / c)
        if m - r > lo:
            lo = m - r
        if m + r < hi:
            hi = m + r
    return LevelWindow(lo, hi, lo > hi)


def _meets(win: LevelWindow, region: IntervalSet) -> bool:
    if win.empty:
        return False
    for a, b in region.items:
        if max(win.lo, a) <= min(win.hi, b):
            return True
    return False


def feasible_at(s: float, par: Parabolas, region: IntervalSet) -> bool:
    return _meets(window(s, par), region)


def level_bounds(
    par: Parabolas, region: IntervalSet, current: float | None = None
) -> tuple[float, float, float]:
    """Bracket ``(s_min, s_max, x_min)`` for the bisection.

    ``s_max`` is the lowest parabola peak.  ``s_min`` is the best envelope value
    among interval endpoints and in-region vertices (plus ``current`` when it is
    admissible), attained at ``x_min``.
    """
    if region.is_empty:
        raise NoFeasiblePosition("feasible region is empty")
    s_max = min(par.height)
    pts = []
    for a, b in region.items:
        pts.append(a)
        if b != a:
            pts.append(b)
        pts.extend(m for m in par.center if a <= m <= b)
    if current is not None and any(a <= current <= b for a, b in region.items):
        pts.append(current)
    x_min, s_min = pts[0], par.envelope(pts[0])
    for x in pts[1:]:
        v = par.envelope(x)
        if v > s_min or (v == s_min and x < x_min):
            x_min, s_min = x, v
    return s_min, s_max, x_min


def _clipped_midpoint(s: float, par: Parabolas, region: IntervalSet) -> float | None:
    """Midpoint of ``window(s)`` clipped to the best-scoring interval."""
    win = window(s, par)
    if win.empty:
        return None
    best_x, best_v = None, -math.inf
    for a, b in region.items:
        lo, hi = max(win.lo, a), min(win.hi, b)
        if lo <= hi:
            x = 0.5 * (lo + hi)
            v = par.envelope(x)
            if v > best_v:
                best_x, best_v = x, v
    return best_x


def maximize_on_region(
    par: Parabolas,
    region: IntervalSet,
    tau: float | None = None,
    current: float | None = None,
) -> BisectionResult:
    s_min, s_max, x_min = level_bounds(par, region, current)
    if tau is None:
        tau = default_tau(s_max)
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")

    if feasible_at(s_max, par, region):
        x = _clipped_midpoint(s_max, par, region)
        return BisectionResult(s_max, x, par.envelope(x), 0, s_max)

    n = 0
    while s_max - s_min > tau:
        s_mid = 0.5 * (s_min + s_max)
        if feasible_at(s_mid, par, region):
            s_min = s_mid
        else:
            s_max = s_mid
        n += 1

    x = _clipped_midpoint(s_min, par, region)
    if x is None:
        # s_min came from the initial bracket and rounding put x_min a hair
        # outside its own window
        x = x_min
    return BisectionResult(s_min, x, par.envelope(x), n, s_max)


def maximize_coordinate(
    p: int, model, layout, region: IntervalSet, tau: float | None = None
) -> tuple[float, float]:
    """``(s, x_p)`` for coordinate ``p``; ``s`` is a certified level within ``tau`` of optimal."""
    res = maximize_on_region(coordinate_problem(model, layout, p), region, tau, current=layout[p])
    return res.level, res.x
