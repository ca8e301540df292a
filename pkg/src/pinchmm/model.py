"""Physical scenario and mean-SNR objective for a pinching-antenna waveguide.

All quantities are linear SI units (meters, hertz, watts).  The waveguide runs
along the x-axis at height ``t``; users sit on the ground plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
LAYOUT_TOL = 1e-9


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watt_to_dbm(watt: float) -> float:
    return 10.0 * math.log10(watt) + 30.0


def to_db(value):
    return 10.0 * np.log10(value)


def wavelength(fc: float) -> float:
    if fc <= 0:
        raise ValueError(f"carrier frequency must be positive, got {fc}")
    return SPEED_OF_LIGHT / fc


def pathloss_coefficient(fc: float) -> float:
    """Free-space path-loss coefficient ``c**2 / (16 pi**2 fc**2)``."""
    if fc <= 0:
        raise ValueError(f"carrier frequency must be positive, got {fc}")
    return SPEED_OF_LIGHT**2 / (16.0 * math.pi**2 * fc**2)


@dataclass(frozen=True)
class UserPosition:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"user coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class ScenarioConfig:
    """Waveguide, RF constants and user placement for one problem instance.

    Parameters
    ----------
    D1, D2 : float
        Waveguide endpoints along x (m).
    delta : float
        Minimum spacing between any two antennas (m).
    t : float
        Waveguide height above the user plane (m).
    fc : float
        Carrier frequency (Hz).
    ptx : float
        Total transmit power (W), split evenly across antennas.
    sigma2 : float
        Noise power (W).
    alpha : float
        LoS blockage rate (1/m^2); ``Pr{LoS} = exp(-alpha d^2)``.
    users : tuple of UserPosition
    num_pinch : int
        Number of pinching antennas P.
    n_eff, feed_x : float
        Waveguide refractive index and feed position.  Only the complex
        channel uses them; they cancel from the mean SNR.
    service_x : (float, float), optional
        x-extent of the service rectangle; its midpoint anchors the CAS
        baseline.  Falls back to the users' x-extent.
    """

    D1: float
    D2: float
    delta: float
    t: float
    fc: float
    ptx: float
    sigma2: float
    alpha: float
    users: tuple[UserPosition, ...]
    num_pinch: int
    n_eff: float = 1.4
    feed_x: float | None = None
    service_x: tuple[float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        if self.service_x is not None:
            object.__setattr__(self, "service_x", tuple(float(v) for v in self.service_x))
        if not self.D1 < self.D2:
            raise ValueError(f"need D1 < D2, got [{self.D1}, {self.D2}]")
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.num_pinch < 1:
            raise ValueError(f"num_pinch must be >= 1, got {self.num_pinch}")
        if (self.D2 - self.D1) < (self.num_pinch - 1) * self.delta:
            raise ValueError(
                f"{self.num_pinch} antennas with spacing {self.delta} do not fit "
                f"in [{self.D1}, {self.D2}]"
            )
        for name in ("t", "fc", "ptx", "sigma2", "n_eff"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if not self.users:
            raise ValueError("at least one user is required")

    @property
    def num_users(self) -> int:
        return len(self.users)

    @property
    def feed(self) -> float:
        return self.D1 if self.feed_x is None else self.feed_x

    @property
    def wavelength(self) -> float:
        return wavelength(self.fc)

    @property
    def eta(self) -> float:
        return pathloss_coefficient(self.fc)

    @property
    def rho_prime(self) -> float:
        """SNR scale ``eta * ptx / (P * sigma2)``."""
        return self.eta * self.ptx / (self.num_pinch * self.sigma2)

    @cached_property
    def user_x(self) -> np.ndarray:
        return np.array([u.x for u in self.users], dtype=float)

    @cached_property
    def user_c(self) -> np.ndarray:
        """Per-user offset ``y**2 + t**2`` of the squared distance."""
        return np.array([u.y**2 + self.t**2 for u in self.users], dtype=float)

    def replace(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class PinchLayout:
    """Antenna x-coordinates along the waveguide."""

    xs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(float(x) for x in self.xs))

    def __len__(self):
        return len(self.xs)

    def __iter__(self):
        return iter(self.xs)

    def __getitem__(self, i):
        return self.xs[i]

    @property
    def array(self) -> np.ndarray:
        return np.array(self.xs, dtype=float)

    def violations(self, cfg: ScenarioConfig, tol: float = LAYOUT_TOL) -> list[str]:
        out = []
        if len(self.xs) != cfg.num_pinch:
            out.append(f"expected {cfg.num_pinch} antennas, got {len(self.xs)}")
        for p, x in enumerate(self.xs):
            if not (cfg.D1 - tol <= x <= cfg.D2 + tol):
                out.append(f"antenna {p} at {x} outside [{cfg.D1}, {cfg.D2}]")
        srt = sorted(self.xs)
        for a, b in zip(srt, srt[1:]):
            if b - a < cfg.delta - tol:
                out.append(f"antennas at {a} and {b} closer than {cfg.delta}")
        return out

    def is_feasible(self, cfg: ScenarioConfig, tol: float = LAYOUT_TOL) -> bool:
        return not self.violations(cfg, tol)

    def check(self, cfg: ScenarioConfig, tol: float = LAYOUT_TOL) -> "PinchLayout":
        bad = self.violations(cfg, tol)
        if bad:
            raise ValueError("infeasible layout: " + "; ".join(bad))
        return self


@dataclass(frozen=True)
class SnrEvaluation:
    per_user: np.ndarray = field(repr=False)
    min_value: float
    argmin_user: int

    @property
    def min_db(self) -> float:
        return float(to_db(self.min_value))


def _coords(layout) -> np.ndarray:
    if isinstance(layout, PinchLayout):
        return layout.array
    return np.asarray(layout, dtype=float)


def sq_distance(xp, cfg: ScenarioConfig) -> np.ndarray:
    """Squared antenna-user distances; output shape ``xp.shape + (U,)``."""
    xp = np.asarray(xp, dtype=float)
    return (xp[..., None] - cfg.user_x) ** 2 + cfg.user_c


def los_probability(user: UserPosition, xp: float, cfg: ScenarioConfig) -> float:
    d2 = (xp - user.x) ** 2 + user.y**2 + cfg.t**2
    return math.exp(-cfg.alpha * d2)


def f_u(z, user: UserPosition, cfg: ScenarioConfig):
    """Blockage-weighted inverse square distance of an antenna at ``z``."""
    q = (np.asarray(z, dtype=float) - user.x) ** 2 + user.y**2 + cfg.t**2
    out = np.exp(-cfg.alpha * q) / q
    return float(out) if out.ndim == 0 else out


def gain_terms(xs, cfg: ScenarioConfig) -> np.ndarray:
    """``f_u(x_p)`` for every antenna and user, shape ``xs.shape + (U,)``."""
    q = sq_distance(xs, cfg)
    return np.exp(-cfg.alpha * q) / q


def snr_matrix(xs, cfg: ScenarioConfig) -> np.ndarray:
    """Mean SNR per user for one or many layouts.

    ``xs`` has shape ``(..., P)``; the result has shape ``(..., U)``.
    """
    xs = np.asarray(xs, dtype=float)
    return cfg.rho_prime * gain_terms(xs, cfg).sum(axis=-2)


def min_snr(xs, cfg: ScenarioConfig):
    return snr_matrix(xs, cfg).min(axis=-1)


def avg_snr(layout, cfg: ScenarioConfig) -> SnrEvaluation:
    xs = _coords(layout)
    if xs.size == 0:
        raise ValueError("layout has no antennas")
    per_user = snr_matrix(xs, cfg)
    u = int(np.argmin(per_user))
    return SnrEvaluation(per_user=per_user, min_value=float(per_user[u]), argmin_user=u)


def complex_channel(user: UserPosition, xp: float, cfg: ScenarioConfig) -> complex:
    """Free-space LoS channel from the antenna at ``xp`` to ``user``.

    Includes the propagation phase inside the waveguide from the feed point.
    """
    d = math.sqrt((xp - user.x) ** 2 + user.y**2 + cfg.t**2)
    lam = cfg.wavelength
    lam_g = lam / cfg.n_eff
    phase = -2.0 * math.pi / lam * d - 2.0 * math.pi / lam_g * abs(cfg.feed - xp)
    return math.sqrt(cfg.eta) / d * complex(math.cos(phase), math.sin(phase))


def channel_matrix(xs, cfg: ScenarioConfig) -> np.ndarray:
    """Vectorised ``complex_channel`` over all users and antennas, shape (U, P)."""
    xs = np.asarray(xs, dtype=float)
    d = np.sqrt(sq_distance(xs, cfg)).T
    lam = cfg.wavelength
    phase = -2.0 * np.pi / lam * d - 2.0 * np.pi * cfg.n_eff / lam * np.abs(cfg.feed - xs)
    return np.sqrt(cfg.eta) / d * np.exp(1j * phase)


def cas_center(cfg: ScenarioConfig) -> float:
    """Midpoint of the service area's x-extent (or of the users' x-extent)."""
    if cfg.service_x is not None:
        return 0.5 * (cfg.service_x[0] + cfg.service_x[1])
    return 0.5 * (float(cfg.user_x.min()) + float(cfg.user_x.max()))


def cas_layout(cfg: ScenarioConfig, center: float | None = None) -> PinchLayout:
    """Conventional array: P antennas at ``lambda/2`` spacing around ``center``."""
    if center is None:
        center = cas_center(cfg)
    half = cfg.wavelength / 2.0
    P = cfg.num_pinch
    xs = [center + (k - (P - 1) / 2.0) * half for k in range(P)]
    layout = PinchLayout(xs)
    bad = layout.violations(cfg)
    if bad:
        raise ValueError("CAS layout is infeasible: " + "; ".join(bad))
    return layout
