"""Run configuration shared by the figure generators, validation and the CLI."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .errors import InvalidArgumentError
from .schemes import DEFAULT_GAMMA_RATE, DEFAULT_LAMBDA, Detuning, DrivingKind, DrivingScheme

__all__ = ["RunConfig", "FIGURE_DEFAULTS", "load_config"]

# figure settings, one place
FIGURE_DEFAULTS = {
    "fig1_beta0": (0.0, 0.25, 0.5, 1.0),
    "fig1_theta_max": 4.0 * math.pi,
    "fig1_points": 1000,
    "fig2_beta0": (0.0, 0.5),
    "fig3_beta0": 0.5,
    "fig3_theta0_max": 2.0 * math.pi,
    "fig3_points": 200,
    "fig4_beta0": 0.5,
    "fig4_theta0_max": 2.0 * math.pi,
    "fig4_points": 200,
    "fig5_beta0_range": (0.0, 0.2),
    "fig5_theta0_range": (0.0, math.pi),
    "fig5_points": 200,
    "p_min": 25.0 / 26.0,
    "xi_span": (0.0, 3.0),
    "omega0": -1.0,
}


@dataclass(frozen=True)
class RunConfig:
    """Every knob the commands accept. ``None`` means the figure's own default."""

    schemes: tuple[DrivingKind, ...] = tuple(DrivingKind)
    beta0: tuple[float, ...] | None = None
    gamma_rate: float = DEFAULT_GAMMA_RATE
    lam: float = DEFAULT_LAMBDA
    theta0: float = 0.0
    theta_dot0: float = 1.0
    tol: float = 1e-10
    grid: int | None = None
    p_min: float = FIGURE_DEFAULTS["p_min"]
    xi_span: tuple[float, float] = FIGURE_DEFAULTS["xi_span"]
    omega0: float = FIGURE_DEFAULTS["omega0"]
    out: str | None = None
    json: bool = False

    def __post_init__(self) -> None:
        kinds = tuple(k if isinstance(k, DrivingKind) else DrivingKind.parse(str(k)) for k in self.schemes)
        object.__setattr__(self, "schemes", kinds)
        if not kinds:
            raise InvalidArgumentError("at least one scheme is required")
        if self.beta0 is not None:
            b = tuple(float(x) for x in self.beta0)
            for x in b:
                Detuning(x)
            object.__setattr__(self, "beta0", b)
        if not (math.isfinite(self.tol) and 0 < self.tol < 1):
            raise InvalidArgumentError(f"tol must lie in (0, 1), got {self.tol}")
        if self.grid is not None and int(self.grid) < 2:
            raise InvalidArgumentError("grid must be at least 2")
        if not (math.isfinite(self.theta0) and self.theta0 >= 0):
            raise InvalidArgumentError("theta0 must be finite and nonnegative")
        if not math.isfinite(self.theta_dot0):
            raise InvalidArgumentError("theta_dot0 must be finite")
        object.__setattr__(self, "xi_span", tuple(float(x) for x in self.xi_span))
        # validates gamma_rate and lam
        DrivingScheme.of(DrivingKind.EXPONENTIAL, self.gamma_rate, self.lam)

    def scheme(self, kind: DrivingKind) -> DrivingScheme:
        return DrivingScheme.of(kind, self.gamma_rate, self.lam)

    def betas(self, default) -> tuple[float, ...]:
        if self.beta0 is not None:
            return self.beta0
        return tuple(default) if isinstance(default, (tuple, list)) else (float(default),)

    def points(self, default: int) -> int:
        return int(self.grid) if self.grid is not None else default

    def with_overrides(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schemes"] = [k.value for k in self.schemes]
        return d


_ALIASES = {"lambda": "lam", "scheme": "schemes", "theta-dot0": "theta_dot0", "gamma-rate": "gamma_rate"}


def load_config(path: str | Path) -> dict:
    """Read a flat JSON object of RunConfig keys (``lambda`` accepted for ``lam``)."""
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgumentError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise InvalidArgumentError("config file must hold a flat JSON object")
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for key, value in raw.items():
        name = _ALIASES.get(key, key.replace("-", "_"))
        if name not in known:
            raise InvalidArgumentError(f"unknown config key {key!r}")
        if isinstance(value, dict):
            raise InvalidArgumentError(f"config key {key!r} must be flat")
        if name == "schemes" and isinstance(value, str):
            value = [value]
        if name == "beta0" and isinstance(value, (int, float)):
            value = [value]
        if name in ("schemes", "beta0", "xi_span"):
            value = tuple(value)
        out[name] = value
    return out
