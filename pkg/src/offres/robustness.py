"""Initial geodesic speeds on and off resonance, robustness coefficients and
the (β₀, θ₀) region where a scheme beats the constant drive on both counts."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .fisher import _ratio
from .schemes import (
    Detuning,
    DrivingKind,
    DrivingScheme,
    DEFAULT_GAMMA_RATE,
    DEFAULT_LAMBDA,
    _envelope,
    _scalar,
    _theta,
)

__all__ = [
    "SpeedPair",
    "RegionGrid",
    "CHALLENGERS",
    "FIG5_THETA0_RANGE",
    "v_on",
    "v_off",
    "speed_pair",
    "robustness_coefficient",
    "beta0_bound_for_fidelity",
    "scan_outperformance_region",
]

# v_on below this (relative to Γ/ħ·|θ'₀|) is treated as a zero of cos(λθ₀)
ZERO_SPEED = 1e-12
CHALLENGERS = (DrivingKind.OSCILLATORY, DrivingKind.EXPONENTIAL, DrivingKind.POWER_LAW)
FIG5_THETA0_RANGE = (0.0, math.pi)


def _rate_envelope(scheme: DrivingScheme, theta0):
    # Γ/ħ × {1, |cos λθ|, (1+λθ)⁻², e^{−λθ}}; kept in the same operation
    # order as the factored √F so v_off and geodesic_speed agree bit for bit
    return scheme.gamma_rate * np.abs(_envelope(scheme, theta0))


def v_on(scheme: DrivingScheme, theta0, theta_dot0: float = 1.0):
    """On-resonance initial geodesic speed (Γ/ħ)·|envelope(θ₀)|·θ'₀."""
    theta0 = _theta(theta0)
    return _scalar(_rate_envelope(scheme, theta0) * abs(theta_dot0))


def v_off(scheme: DrivingScheme, det: Detuning, theta0, theta_dot0: float = 1.0):
    """Off-resonance initial geodesic speed, closed form per scheme."""
    theta0 = _theta(theta0)
    return _scalar(_rate_envelope(scheme, theta0) * _ratio(scheme, det, theta0) * abs(theta_dot0))


@dataclass(frozen=True)
class SpeedPair:
    v_on: float
    v_off: float
    r: float


def robustness_coefficient(scheme: DrivingScheme, det: Detuning, theta0):
    """r = v_off / v_on; NaN marks the undefined ratio where v_on vanishes."""
    theta0 = _theta(theta0)
    r = _ratio(scheme, det, theta0)
    undefined = np.abs(_envelope(scheme, theta0)) < ZERO_SPEED
    return _scalar(np.where(undefined, np.nan, r))


def speed_pair(scheme: DrivingScheme, det: Detuning, theta0: float, theta_dot0: float = 1.0) -> SpeedPair:
    return SpeedPair(
        float(v_on(scheme, theta0, theta_dot0)),
        float(v_off(scheme, det, theta0, theta_dot0)),
        float(robustness_coefficient(scheme, det, theta0)),
    )


def beta0_bound_for_fidelity(p_min: float) -> float:
    """Largest β₀ whose peak success probability 1/(1+β₀²) is at least ``p_min``."""
    if not (0.0 < p_min <= 1.0):
        raise InvalidArgumentError(f"p_min must lie in (0, 1], got {p_min}")
    return math.sqrt(1.0 / p_min - 1.0)


@dataclass
class RegionGrid:
    """Per-cell speeds, robustness ratios and dominance flags on a (β₀, θ₀) grid.

    Arrays are indexed ``[i_beta0, i_theta0]``; ``dominates[kind]`` is true
    where that scheme is at least as fast and at least as robust as the
    constant drive.
    """

    beta0_axis: np.ndarray
    theta0_axis: np.ndarray
    v_off: dict
    r: dict
    dominates: dict
    excluded: np.ndarray
    gamma_rate: float = DEFAULT_GAMMA_RATE
    lam: float = DEFAULT_LAMBDA
    theta_dot0: float = 1.0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.beta0_axis.size, self.theta0_axis.size)

    def region(self, kind: DrivingKind) -> np.ndarray:
        return self.dominates[kind] & ~self.excluded

    def recompute_flags(self, winner: DrivingKind, loser: DrivingKind = DrivingKind.CONSTANT) -> np.ndarray:
        """Dominance of any scheme over any other, from the stored raw values."""
        return (self.v_off[winner] >= self.v_off[loser]) & (self.r[winner] >= self.r[loser])

    def columns(self) -> list[str]:
        cols = ["beta0", "theta0"]
        cols += [f"v_off_{k.value}" for k in DrivingKind]
        cols += [f"r_{k.value}" for k in DrivingKind]
        cols += [f"dominates_{k.value}" for k in CHALLENGERS]
        cols.append("excluded")
        return cols

    def rows(self):
        for i, b in enumerate(self.beta0_axis):
            for j, t in enumerate(self.theta0_axis):
                row = [float(b), float(t)]
                row += [float(self.v_off[k][i, j]) for k in DrivingKind]
                row += [float(self.r[k][i, j]) for k in DrivingKind]
                row += [int(self.dominates[k][i, j]) for k in CHALLENGERS]
                row.append(int(self.excluded[i, j]))
                yield row

    def to_csv(self, fh=None) -> str | None:
        """One row per cell, full double precision."""
        target = fh if fh is not None else io.StringIO()
        writer = csv.writer(target, lineterminator="\n")
        writer.writerow(self.columns())
        for row in self.rows():
            writer.writerow([f"{x:.17g}" if isinstance(x, float) else x for x in row])
        return None if fh is not None else target.getvalue()

    def to_json(self) -> str:
        payload = {
            "gamma_rate": self.gamma_rate,
            "lambda": self.lam,
            "theta_dot0": self.theta_dot0,
            "beta0_axis": self.beta0_axis.tolist(),
            "theta0_axis": self.theta0_axis.tolist(),
            "v_off": {k.value: self.v_off[k].tolist() for k in DrivingKind},
            "r": {k.value: np.where(np.isnan(self.r[k]), None, self.r[k]).tolist() for k in DrivingKind},
            "dominates": {k.value: self.dominates[k].tolist() for k in CHALLENGERS},
            "excluded": self.excluded.tolist(),
        }
        return json.dumps(payload)


def _axis(lo: float, hi: float, n: int) -> np.ndarray:
    if n < 1:
        raise InvalidArgumentError("grid resolution must be at least 1")
    if n == 1:
        return np.array([float(lo)])
    if not hi > lo:
        raise InvalidArgumentError(f"empty range [{lo}, {hi}]")
    return np.linspace(lo, hi, n)


def scan_outperformance_region(
    beta0_range: tuple[float, float] = (0.0, 0.2),
    theta0_range: tuple[float, float] = FIG5_THETA0_RANGE,
    resolution: int | tuple[int, int] = 200,
    p_min: float = 25.0 / 26.0,
    gamma_rate: float = DEFAULT_GAMMA_RATE,
    lam: float = DEFAULT_LAMBDA,
    theta_dot0: float = 1.0,
) -> RegionGrid:
    """Classify each (β₀, θ₀) cell by which schemes beat the constant drive.

    The β₀ range is clipped to the fidelity bound implied by ``p_min``.
    Cells where any on-resonance speed vanishes are marked excluded.
    """
    n_beta, n_theta = (resolution, resolution) if isinstance(resolution, int) else resolution
    b_lo, b_hi = map(float, beta0_range)
    bound = beta0_bound_for_fidelity(p_min)
    b_lo, b_hi = max(b_lo, 0.0), min(b_hi, bound)
    if b_hi < b_lo:
        raise InvalidArgumentError(f"beta0 range lies above the fidelity bound {bound:.6g}")
    t_lo, t_hi = map(float, theta0_range)
    if t_lo < 0:
        raise InvalidArgumentError("theta0 range must be nonnegative")
    betas = _axis(b_lo, b_hi, n_beta)
    thetas = _axis(t_lo, t_hi, n_theta)

    speeds = {k: np.empty((betas.size, thetas.size)) for k in DrivingKind}
    ratios = {k: np.empty((betas.size, thetas.size)) for k in DrivingKind}
    excluded = np.zeros((betas.size, thetas.size), dtype=bool)
    for k in DrivingKind:
        scheme = DrivingScheme.of(k, gamma_rate, lam)
        zero_on = np.abs(_envelope(scheme, thetas)) < ZERO_SPEED
        for i, b in enumerate(betas):
            det = Detuning(float(b))
            speeds[k][i] = v_off(scheme, det, thetas, theta_dot0)
            ratios[k][i] = robustness_coefficient(scheme, det, thetas)
        excluded |= zero_on[np.newaxis, :]

    const = DrivingKind.CONSTANT
    dominates = {
        k: (speeds[k] >= speeds[const]) & (ratios[k] >= ratios[const]) & ~excluded
        for k in CHALLENGERS
    }
    return RegionGrid(betas, thetas, speeds, ratios, dominates, excluded, gamma_rate, lam, theta_dot0)
