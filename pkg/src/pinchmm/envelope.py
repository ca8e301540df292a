"""Per-coordinate subproblem: the lower envelope of downward parabolas.

With every antenna except ``p`` frozen, user ``u``'s surrogate is
``h_u(x) = height_u - curv_u (x - center_u)**2``.  Both inner solvers act on
this family.  It is stored as plain Python floats because the inner loops are
scalar and short (U is a few dozen at most).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surrogate import SurrogateModel, partial_L_tilde


class NoFeasiblePosition(RuntimeError):
    """The feasible region for a coordinate is empty."""


@dataclass(frozen=True)
class Parabolas:
    height: tuple[float, ...]
    curv: tuple[float, ...]
    center: tuple[float, ...]

    def __post_init__(self):
        n = len(self.height)
        if not (len(self.curv) == len(self.center) == n) or n == 0:
            raise ValueError("height, curv and center must be nonempty and equal length")
        for c in self.curv:
            if c < 0:
                raise ValueError("parabolas must open downward (curv >= 0)")

    @classmethod
    def from_arrays(cls, height, curv, center) -> "Parabolas":
        return cls(
            tuple(float(v) for v in height),
            tuple(float(v) for v in curv),
            tuple(float(v) for v in center),
        )

    def __len__(self) -> int:
        return len(self.height)

    def values(self, x: float) -> list[float]:
        return [h - c * (x - m) * (x - m) for h, c, m in zip(self.height, self.curv, self.center)]

    def envelope(self, x: float) -> float:
        """``min_u h_u(x)``."""
        return min(h - c * (x - m) * (x - m) for h, c, m in zip(self.height, self.curv, self.center))

    def envelope_array(self, xs) -> np.ndarray:
        """Vectorised envelope for grid oracles."""
        xs = np.asarray(xs, dtype=float)
        h = np.asarray(self.height)
        c = np.asarray(self.curv)
        m = np.asarray(self.center)
        return (h - c * (xs[..., None] - m) ** 2).min(axis=-1)


def coordinate_problem(model: SurrogateModel, layout, p: int) -> Parabolas:
    """Parabola family seen by coordinate ``p`` given the other coordinates of ``layout``."""
    return Parabolas.from_arrays(
        partial_L_tilde(model, layout, p), model.curvature[:, p], model.user_x
    )
