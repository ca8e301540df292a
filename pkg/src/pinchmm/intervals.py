"""Sorted unions of disjoint closed intervals.

Only what the per-antenna feasible region needs: build ``[D1, D2]`` minus open
neighbourhoods of the other antennas, clip to a window, membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

# spacing slack when deciding whether an antenna's current spot is still admissible
KEEP_TOL = 1e-9


@dataclass(frozen=True)
class IntervalSet:
    """Immutable union of closed intervals ``[a_m, b_m]`` with ``b_m < a_{m+1}``.

    Zero-width intervals ``[a, a]`` are legitimate members.
    """

    items: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        items = tuple((float(a), float(b)) for a, b in self.items)
        for a, b in items:
            if a > b:
                raise ValueError(f"malformed interval [{a}, {b}]")
        for (_, b0), (a1, _) in zip(items, items[1:]):
            if not b0 < a1:
                raise ValueError("intervals must be sorted and disjoint")
        object.__setattr__(self, "items", items)

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple[float, float]]) -> "IntervalSet":
        """Normalise arbitrary closed intervals (merging overlaps, dropping empties)."""
        merged: list[list[float]] = []
        for a, b in sorted((float(a), float(b)) for a, b in intervals if a <= b):
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return cls(tuple((a, b) for a, b in merged))

    def __iter__(self) -> Iterator[tuple[float, float]]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    @property
    def is_empty(self) -> bool:
        return not self.items

    @property
    def length(self) -> float:
        return sum(b - a for a, b in self.items)

    @property
    def bounds(self) -> tuple[float, float]:
        if not self.items:
            raise ValueError("empty interval set has no bounds")
        return self.items[0][0], self.items[-1][1]


def contains(iset: IntervalSet, x: float) -> bool:
    return any(a <= x <= b for a, b in iset.items)


def intersect(iset: IntervalSet, lo: float, hi: float) -> IntervalSet:
    """Clip ``iset`` to the closed window ``[lo, hi]``; ``lo > hi`` is empty."""
    if lo > hi:
        return IntervalSet()
    out = []
    for a, b in iset.items:
        a2, b2 = max(a, lo), min(b, hi)
        if a2 <= b2:
            out.append((a2, b2))
    return IntervalSet(tuple(out))


def subtract_open(lo: float, hi: float, holes: Iterable[tuple[float, float]]) -> IntervalSet:
    """``[lo, hi]`` minus a union of open intervals ``(c, d)``."""
    pieces = []
    cursor = lo
    for c, d in sorted(holes):
        if d <= cursor:
            continue
        if c >= hi:
            break
        if c >= cursor:
            pieces.append((cursor, c))
        cursor = max(cursor, d)
        if cursor > hi:
            break
    if cursor <= hi:
        pieces.append((cursor, hi))
    # touching pieces [x, c] and [c, y] cannot occur: holes are open, so a
    # shared endpoint would need a zero-length hole
    return IntervalSet.from_intervals(pieces)


def feasible_region(
    p: int,
    layout: Sequence[float],
    D1: float,
    D2: float,
    delta: float,
    keep_current: bool = False,
) -> IntervalSet:
    """Admissible positions for antenna ``p`` with every other antenna frozen.

    Returns ``[D1, D2]`` minus ``(x_q - delta, x_q + delta)`` for all ``q != p``.
    With ``keep_current`` the present ``layout[p]`` is added back as a point
    when rounding (spacing a few ulps short of ``delta``) has cut it out.
    """
    others = [x for q, x in enumerate(layout) if q != p]
    region = subtract_open(D1, D2, [(x - delta, x + delta) for x in others])
    if keep_current:
        x = float(layout[p])
        if (
            not contains(region, x)
            and D1 <= x <= D2
            and all(abs(x - y) >= delta - KEEP_TOL for y in others)
        ):
            region = IntervalSet(tuple(sorted(region.items + ((x, x),))))
    return region


def region_for(p: int, layout: Sequence[float], cfg, keep_current: bool = True) -> IntervalSet:
    return feasible_region(p, layout, cfg.D1, cfg.D2, cfg.delta, keep_current)
