"""Candidate search: exact maximisation of a parabola envelope on an interval set.

The minimum of finitely many concave parabolas attains its maximum over a
closed interval at an endpoint, at a parabola vertex, or where two parabolas
cross.  Enumerating all three kinds (O(U^2) crossings, each scored in O(U))
gives the exact optimum in O(U^3) per interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .envelope import NoFeasiblePosition, Parabolas, coordinate_problem
from .intervals import IntervalSet, contains

ROOT_SLACK = 1e-10
TIE_TOL = 1e-12
LINEAR_TOL = 1e-14

ENDPOINT, VERTEX, INTERSECTION = "endpoint", "vertex", "intersection"


class Candidate(NamedTuple):
    x: float
    kind: str
    value: float


@dataclass(frozen=True)
class CandidateSet:
    points: tuple[Candidate, ...]

    def __len__(self):
        return len(self.points)

    def xs(self) -> list[float]:
        return [c.x for c in self.points]

    def best(self) -> Candidate:
        return _pick(self.points)


def crossings(par: Parabolas, u: int, w: int, origin: float = 0.0) -> list[float]:
    """Real solutions of ``h_u(x) = h_w(x)``.

    The quadratic is formed in the shifted variable ``y = x - origin`` to
    limit cancellation, and solved with the cancellation-free root pair.
    """
    hu, cu, mu = par.height[u], par.curv[u], par.center[u] - origin
    hw, cw, mw = par.height[w], par.curv[w], par.center[w] - origin
    A = cw - cu
    B = 2.0 * (cu * mu - cw * mw)
    C = (hu - cu * mu * mu) - (hw - cw * mw * mw)
    if abs(A) <= LINEAR_TOL * max(cu, cw, 1e-300):
        if B == 0.0:
            return []
        return [origin - C / B]
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    q = -0.5 * (B + math.copysign(sq, B))
    if q == 0.0:
        return [origin]
    return [origin + q / A, origin + C / q]


def candidates(a: float, b: float, par: Parabolas) -> CandidateSet:
    """Endpoints, in-interval vertices and in-interval pairwise crossings on ``[a, b]``."""
    if a > b:
        raise ValueError(f"malformed interval [{a}, {b}]")
    pts: list[tuple[float, str]] = [(a, ENDPOINT)]
    if b != a:
        pts.append((b, ENDPOINT))
    for m in par.center:
        if a <= m <= b:
            pts.append((m, VERTEX))
    scored = [Candidate(x, kind, par.envelope(x)) for x, kind in pts]
    slack = ROOT_SLACK * max(1.0, abs(a), abs(b))
    origin = 0.5 * (a + b)
    n = len(par)
    for u in range(n):
        for w in range(u + 1, n):
            for r in crossings(par, u, w, origin):
                if a <= r <= b:
                    scored.append(Candidate(r, INTERSECTION, crossing_value(par, r, u, w)))
                elif a - slack <= r <= b + slack:
                    r = min(max(r, a), b)
                    scored.append(Candidate(r, INTERSECTION, par.envelope(r)))
    return CandidateSet(tuple(scored))


def crossing_value(par: Parabolas, x: float, u: int, w: int) -> float:
    """Envelope at a crossing of ``u`` and ``w``.

    The two parabolas agree there, so the pair is scored by whichever one has
    the smaller subtracted term.  Near the root of a tall, steep parabola its
    own evaluation cancels to noise of order ``eps * height``, which can
    exceed the envelope itself when user SNRs span many decades.
    """
    du = par.curv[u] * (x - par.center[u]) ** 2
    dw = par.curv[w] * (x - par.center[w]) ** 2
    v = par.height[u] - du if du <= dw else par.height[w] - dw
    for k, (h, c, m) in enumerate(zip(par.height, par.curv, par.center)):
        if k != u and k != w:
            v = min(v, h - c * (x - m) * (x - m))
    return v


def _pick(points) -> Candidate:
    """Highest envelope value; near-ties (relative) go to the smallest x."""
    best = None
    for c in points:
        if best is None:
            best = c
            continue
        tol = TIE_TOL * max(abs(best.value), abs(c.value))
        if c.value > best.value + tol or (abs(c.value - best.value) <= tol and c.x < best.x):
            best = c
    return best


def maximize_on_region(
    par: Parabolas, region: IntervalSet, current: float | None = None
) -> tuple[float, float]:
    """Exact ``argmax`` and ``max`` of ``min_u h_u`` over ``region``.

    If ``current`` (the coordinate's present value) lies in ``region`` and
    ties the best candidate, it is returned instead: on a plateau the
    smallest-x candidate is the plateau edge, where a second user becomes
    binding and stalls the remaining coordinates.
    """
    if region.is_empty:
        raise NoFeasiblePosition("feasible region is empty")
    per_interval = [candidates(a, b, par).best() for a, b in region]
    best = _pick(per_interval)
    if current is not None and contains(region, current):
        v = par.envelope(current)
        if v >= best.value - TIE_TOL * max(abs(v), abs(best.value)):
            return current, v
    return best.x, best.value


def maximize_coordinate(p: int, model, layout, region: IntervalSet) -> tuple[float, float]:
    return maximize_on_region(coordinate_problem(model, layout, p), region, current=layout[p])
