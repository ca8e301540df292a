"""Tangent quadratic minorizer of the per-user mean SNR.

Writing ``q = (z - x_u)**2 + c_u``, each antenna term ``exp(-alpha q) / q`` is
convex in ``q``, so its tangent line in ``q`` is a global under-estimator.
In ``z`` that tangent is a downward parabola centred on the user, and summing
over antennas gives a lower bound ``L_u(x)`` that touches ``S_u`` at the anchor
with matching gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import PinchLayout, ScenarioConfig, UserPosition, _coords, snr_matrix, sq_distance


def slope_in_q(q, alpha: float):
    """Derivative of ``exp(-alpha q) / q`` with respect to ``q``."""
    q = np.asarray(q, dtype=float)
    return -np.exp(-alpha * q) * (alpha * q + 1.0) / q**2


def b_coefficient(z0: float, user: UserPosition, cfg: ScenarioConfig) -> float:
    q0 = (z0 - user.x) ** 2 + user.y**2 + cfg.t**2
    return -math.exp(-cfg.alpha * q0) * (cfg.alpha * q0 + 1.0) / (q0 * q0)


@dataclass(frozen=True)
class SurrogateModel:
    """Minorizer coefficients frozen at an anchor layout.

    Attributes
    ----------
    anchor : ndarray, shape (P,)
    b : ndarray, shape (U, P)
        Tangent slopes in the squared-offset variable; all negative.
    l_bar : ndarray, shape (U,)
        Constant part so that ``L_u(x) = l_bar[u] + rho' sum_p b[u,p] (x_p - x_u)**2``.
    rho_prime : float
    user_x : ndarray, shape (U,)
    s_anchor : ndarray, shape (U,)
        True mean SNR at the anchor.
    """

    anchor: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    l_bar: np.ndarray = field(repr=False)
    rho_prime: float
    user_x: np.ndarray = field(repr=False)
    s_anchor: np.ndarray = field(repr=False)

    @property
    def num_users(self) -> int:
        return self.b.shape[0]

    @property
    def num_pinch(self) -> int:
        return self.b.shape[1]

    @property
    def curvature(self) -> np.ndarray:
        """Positive parabola widths ``-rho' b``, shape (U, P)."""
        return -self.rho_prime * self.b


def build(anchor, cfg: ScenarioConfig, check: bool = True) -> SurrogateModel:
    xs = _coords(anchor)
    if check:
        PinchLayout(xs).check(cfg)
    q0 = sq_distance(xs, cfg).T  # (U, P)
    b = slope_in_q(q0, cfg.alpha)
    s_anchor = snr_matrix(xs, cfg)
    offsets = (xs[None, :] - cfg.user_x[:, None]) ** 2
    l_bar = s_anchor - cfg.rho_prime * (b * offsets).sum(axis=1)
    return SurrogateModel(
        anchor=xs.copy(),
        b=b,
        l_bar=l_bar,
        rho_prime=cfg.rho_prime,
        user_x=cfg.user_x.copy(),
        s_anchor=s_anchor,
    )


def eval_L(model: SurrogateModel, layout) -> np.ndarray:
    """Surrogate ``L_u`` for one layout (shape (U,)) or a batch ``(..., P)``."""
    xs = _coords(layout)
    offsets = (xs[..., None, :] - model.user_x[:, None]) ** 2  # (..., U, P)
    return model.l_bar + model.rho_prime * (model.b * offsets).sum(axis=-1)


def minorizer_gap(model: SurrogateModel, layout, cfg: ScenarioConfig) -> np.ndarray:
    """``S_u(x) - L_u(x)`` accumulated term by term (better conditioned than
    subtracting the two totals)."""
    xs = _coords(layout)
    q = sq_distance(xs, cfg)  # (..., P, U)
    q0 = sq_distance(model.anchor, cfg)  # (P, U)
    f = np.exp(-cfg.alpha * q) / q
    f0 = np.exp(-cfg.alpha * q0) / q0
    terms = f - f0 - model.b.T * (q - q0)
    return model.rho_prime * terms.sum(axis=-2)


def grad_L(model: SurrogateModel, layout) -> np.ndarray:
    """Jacobian ``dL_u / dx_p``, shape (U, P)."""
    xs = _coords(layout)
    return 2.0 * model.rho_prime * model.b * (xs[None, :] - model.user_x[:, None])


def partial_L_tilde(model: SurrogateModel, layout, p: int) -> np.ndarray:
    """Per-user constant of ``L_u`` when only coordinate ``p`` moves.

    ``eval_L(model, x)[u] == partial_L_tilde(model, x, p)[u]
    + rho' b[u, p] (x_p - x_u)**2``.
    """
    xs = _coords(layout)
    if not 0 <= p < model.num_pinch:
        raise IndexError(f"antenna index {p} out of range")
    offsets = (xs[None, :] - model.user_x[:, None]) ** 2
    terms = model.b * offsets
    terms[:, p] = 0.0
    return model.l_bar + model.rho_prime * terms.sum(axis=1)
