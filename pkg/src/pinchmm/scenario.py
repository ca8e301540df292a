"""Scenario generation and the flat ``key = value`` scenario file format.

File format::

    # comments start with '#'
    D1 = -10
    D2 = 10
    ptx_dbm = 40          # or: ptx = 10.0  (watts)
    sigma2_dbm = -90      # or: sigma2 = 1e-12
    user = 3.5, -1.25     # one line per user: x, y
    service_x = -20, 20   # optional

Recognised scalar keys: D1, D2, delta, t, fc, ptx, ptx_dbm, sigma2,
sigma2_dbm, alpha, n_eff, feed_x, num_pinch.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import SPEED_OF_LIGHT, ScenarioConfig, UserPosition, dbm_to_watt

DEFAULTS = dict(
    D1=-10.0,
    D2=10.0,
    t=3.0,
    fc=28e9,
    ptx_dbm=40.0,
    sigma2_dbm=-90.0,
    alpha=0.01,
    num_pinch=5,
    n_eff=1.4,
)

FLOAT_KEYS = ("D1", "D2", "delta", "t", "fc", "ptx", "ptx_dbm", "sigma2", "sigma2_dbm",
              "alpha", "n_eff", "feed_x")


@dataclass(frozen=True)
class ScenarioGenSpec:
    rect_width: float = 10.0
    rect_length: float = 40.0
    num_users: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.rect_width <= 0 or self.rect_length <= 0:
            raise ValueError("service rectangle extents must be positive")
        if self.num_users < 1:
            raise ValueError("num_users must be >= 1")


def build_config(users, **overrides) -> ScenarioConfig:
    """Assemble a ScenarioConfig from defaults, accepting dBm power keys.

    ``delta`` defaults to half a wavelength at the chosen carrier.
    """
    p = {**DEFAULTS, **{k: v for k, v in overrides.items() if v is not None}}
    if "ptx" not in overrides or overrides["ptx"] is None:
        p["ptx"] = dbm_to_watt(p["ptx_dbm"])
    if "sigma2" not in overrides or overrides["sigma2"] is None:
        p["sigma2"] = dbm_to_watt(p["sigma2_dbm"])
    if p.get("delta") is None:
        p["delta"] = SPEED_OF_LIGHT / p["fc"] / 2.0
    return ScenarioConfig(
        D1=float(p["D1"]),
        D2=float(p["D2"]),
        delta=float(p["delta"]),
        t=float(p["t"]),
        fc=float(p["fc"]),
        ptx=float(p["ptx"]),
        sigma2=float(p["sigma2"]),
        alpha=float(p["alpha"]),
        users=tuple(users),
        num_pinch=int(p["num_pinch"]),
        n_eff=float(p["n_eff"]),
        feed_x=None if p.get("feed_x") is None else float(p["feed_x"]),
        service_x=p.get("service_x"),
    )


def draw_users(spec: ScenarioGenSpec, center_x: float = 0.0) -> list[UserPosition]:
    """Users i.i.d. uniform in a rectangle centred on the waveguide axis."""
    rng = np.random.default_rng(spec.seed)
    xs = center_x + rng.uniform(-spec.rect_length / 2, spec.rect_length / 2, spec.num_users)
    ys = rng.uniform(-spec.rect_width / 2, spec.rect_width / 2, spec.num_users)
    return [UserPosition(float(x), float(y)) for x, y in zip(xs, ys)]


def generate_scenario(spec: ScenarioGenSpec, **rf) -> ScenarioConfig:
    """Random scenario with the default RF setup, overridable via keyword args."""
    D1 = rf.get("D1") if rf.get("D1") is not None else DEFAULTS["D1"]
    D2 = rf.get("D2") if rf.get("D2") is not None else DEFAULTS["D2"]
    center = 0.5 * (D1 + D2)
    users = draw_users(spec, center)
    service = (center - spec.rect_length / 2, center + spec.rect_length / 2)
    return build_config(users, service_x=service, **rf)


def parse_config(text: str) -> dict:
    """Parse scenario text into a dict of raw values (``users`` is a list)."""
    out: dict = {"users": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key == "user":
                x, y = (float(v) for v in value.split(","))
                out["users"].append(UserPosition(x, y))
            elif key == "service_x":
                a, b = (float(v) for v in value.split(","))
                out["service_x"] = (a, b)
            elif key == "num_pinch":
                out[key] = int(value)
            elif key in FLOAT_KEYS:
                out[key] = float(value)
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return out


def load_config(path, **overrides) -> ScenarioConfig:
    raw = parse_config(Path(path).read_text())
    users = raw.pop("users")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    if not users:
        raise ValueError(f"{path}: no 'user = x, y' lines")
    # explicit dBm overrides win over watt values from the file
    if overrides.get("ptx_dbm") is not None:
        raw.pop("ptx", None)
    if overrides.get("sigma2_dbm") is not None:
        raw.pop("sigma2", None)
    return build_config(users, **raw)


def format_config(cfg: ScenarioConfig) -> str:
    lines = [
        "# pinching-antenna scenario",
        f"D1 = {cfg.D1!r}",
        f"D2 = {cfg.D2!r}",
        f"delta = {cfg.delta!r}",
        f"t = {cfg.t!r}",
        f"fc = {cfg.fc!r}",
        f"ptx = {cfg.ptx!r}",
        f"sigma2 = {cfg.sigma2!r}",
        f"alpha = {cfg.alpha!r}",
        f"num_pinch = {cfg.num_pinch}",
        f"n_eff = {cfg.n_eff!r}",
    ]
    if cfg.feed_x is not None:
        lines.append(f"feed_x = {cfg.feed_x!r}")
    if cfg.service_x is not None:
        lines.append(f"service_x = {cfg.service_x[0]!r}, {cfg.service_x[1]!r}")
    lines += [f"user = {u.x!r}, {u.y!r}" for u in cfg.users]
    return "\n".join(lines) + "\n"


def save_config(cfg: ScenarioConfig, path) -> None:
    Path(path).write_text(format_config(cfg))
