"""Fisher information of the two-outcome model (p₀, p₁) = (𝒜 sin²Σ, 1 − 𝒜 sin²Σ)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .schemes import (
    Detuning,
    DrivingKind,
    DrivingScheme,
    _dsigma,
    _envelope,
    _p0,
    _scalar,
    _sigma,
    _theta,
)

__all__ = [
    "FisherPoint",
    "dsigma_dtheta",
    "fisher_generic",
    "fisher_point",
    "fisher_closed",
    "fisher_on_resonance",
    "fisher_finite_difference",
    "fd_admissible",
]


@dataclass(frozen=True)
class FisherPoint:
    theta: float
    value: float
    removable_limit: bool = False


def dsigma_dtheta(scheme: DrivingScheme, det: Detuning, theta):
    """Analytic dΣ/dθ = ℬ × envelope(θ)."""
    theta = _theta(theta)
    return _scalar(_dsigma(scheme, det, theta))


def _generic(scheme: DrivingScheme, det: Detuning, theta):
    # returns (value, mask of points that used a removable limit)
    amp = det.amp_factor
    s = _sigma(scheme, det, theta)
    ds = _dsigma(scheme, det, theta)
    sin_s, cos_s = np.sin(s), np.cos(s)
    p0 = amp * sin_s ** 2
    p1 = 1.0 - p0
    dp0 = 2.0 * amp * sin_s * cos_s * ds
    with np.errstate(divide="ignore", invalid="ignore"):
        term0 = np.where(p0 > 0, dp0 ** 2 / np.where(p0 > 0, p0, 1.0), 4.0 * amp * cos_s ** 2 * ds ** 2)
        # p1 vanishes only on resonance at Σ = π/2 mod π; the limit of ṗ₁²/p₁ there is 4 sin²Σ (dΣ/dθ)²
        term1 = np.where(p1 > 0, dp0 ** 2 / np.where(p1 > 0, p1, 1.0), 4.0 * sin_s ** 2 * ds ** 2)
    return term0 + term1, (p0 <= 0) | (p1 <= 0)


def fisher_generic(scheme: DrivingScheme, det: Detuning, theta):
    """ṗ₀²/p₀ + ṗ₁²/p₁ with chain-rule derivatives.

    Where p₀ or p₁ vanishes exactly the continuous limit is substituted.
    """
    theta = _theta(theta)
    value, _ = _generic(scheme, det, theta)
    return _scalar(value)


def fisher_point(scheme: DrivingScheme, det: Detuning, theta: float) -> FisherPoint:
    theta_arr = _theta(theta)
    value, limit = _generic(scheme, det, theta_arr)
    return FisherPoint(float(theta), float(value), bool(limit))


def _closed(scheme: DrivingScheme, det: Detuning, theta):
    if det.on_resonance:
        return 4.0 * _dsigma(scheme, det, theta) ** 2
    return _closed_verbatim(scheme, det, theta)


def _closed_verbatim(scheme: DrivingScheme, det: Detuning, theta):
    amp = det.amp_factor
    rate = det.rate_factor * scheme.gamma_rate
    k = scheme.kind
    lam = scheme.lam
    if k is DrivingKind.CONSTANT:
        c = np.cos(2.0 * rate * theta)
        return 4.0 * amp * rate ** 2 * (1.0 + c) / (2.0 - amp * (1.0 - c))
    if k is DrivingKind.OSCILLATORY:
        arg = rate / lam * np.sin(lam * theta)
        return (8.0 * amp * rate ** 2 * np.cos(lam * theta) ** 2 * np.cos(arg) ** 2
                / (2.0 - amp * (1.0 - np.cos(2.0 * arg))))
    if k is DrivingKind.POWER_LAW:
        u = 1.0 + lam * theta
        c = np.cos(2.0 * rate * theta / u)
        return 4.0 * amp * rate ** 2 / u ** 4 * (1.0 + c) / (2.0 - amp * (1.0 - c))
    c = np.cos(2.0 * rate / lam * (1.0 - np.exp(-lam * theta)))
    return 4.0 * amp * rate ** 2 * np.exp(-2.0 * lam * theta) * (1.0 + c) / (2.0 - amp * (1.0 - c))


def _two_sigma(scheme: DrivingScheme, det: Detuning, theta):
    rate = det.rate_factor * scheme.gamma_rate
    k = scheme.kind
    lam = scheme.lam
    if k is DrivingKind.CONSTANT:
        return 2.0 * rate * theta
    if k is DrivingKind.OSCILLATORY:
        return 2.0 / lam * rate * np.sin(lam * theta)
    if k is DrivingKind.POWER_LAW:
        return 2.0 * rate * theta / (1.0 + lam * theta)
    return 2.0 / lam * rate * -np.expm1(-lam * theta)


def _ratio(scheme: DrivingScheme, det: Detuning, theta):
    """{(1 + cos 2Σ) / (2 − 𝒜[1 − cos 2Σ])}^{1/2}, the off/on speed ratio."""
    if det.on_resonance:
        return np.ones_like(np.asarray(theta, dtype=float))
    c = np.cos(_two_sigma(scheme, det, theta))
    # ≤ 1 exactly since 𝒜 ≤ 1; rounding can overshoot by an ulp when 𝒜 → 1
    return np.minimum(np.sqrt((1.0 + c) / (2.0 - det.amp_factor * (1.0 - c))), 1.0)


def _root_fisher(scheme: DrivingScheme, det: Detuning, theta):
    # √F in factored form 2(Γ/ħ)|envelope|·ratio; √𝒜·ℬ = Γ/ħ cancels exactly
    return 2.0 * scheme.gamma_rate * np.abs(_envelope(scheme, theta)) * _ratio(scheme, det, theta)


def fisher_closed(scheme: DrivingScheme, det: Detuning, theta):
    """Scheme-specific closed form of the Fisher information.

    On resonance this is the reduction 4(dΣ/dθ)², which also removes the
    0/0 at Σ = π/2 mod π.
    """
    theta = _theta(theta)
    return _scalar(_closed(scheme, det, theta))


def fisher_on_resonance(scheme: DrivingScheme, theta):
    """β₀ = 0 reductions: 4ℬ² × {1, cos²λθ, (1+λθ)⁻⁴, e^{−2λθ}}."""
    theta = _theta(theta)
    return _scalar(4.0 * _dsigma(scheme, Detuning(0.0), theta) ** 2)


def _central(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def fisher_finite_difference(scheme: DrivingScheme, det: Detuning, theta, h: float = 1e-6):
    """Fisher information from Richardson-extrapolated central differences of p₀, p₁.

    Uses only the probabilities themselves, never dΣ/dθ.
    """
    theta = np.asarray(theta, dtype=float)

    def p0(x):
        return _p0(scheme, det, x)

    def p1(x):
        return 1.0 - _p0(scheme, det, x)

    def deriv(f):
        return (4.0 * _central(f, theta, h / 2) - _central(f, theta, h)) / 3.0

    d0, d1 = deriv(p0), deriv(p1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return _scalar(d0 ** 2 / p0(theta) + d1 ** 2 / p1(theta))


def fd_admissible(scheme: DrivingScheme, det: Detuning, theta, p_floor: float = 1e-4,
                  slope_floor: float = 1e-3):
    """Points where the finite-difference estimate is well conditioned.

    Central differences carry an absolute error near ε/h in ṗ, so the
    relative error of ṗ²/p blows up where p₀ or p₁ approaches 0 or where
    ṗ₀ itself vanishes. ``slope_floor`` is in units of Γ/ħ.
    """
    theta = np.asarray(theta, dtype=float)
    s = _sigma(scheme, det, theta)
    p0 = det.amp_factor * np.sin(s) ** 2
    dp0 = 2.0 * det.amp_factor * np.sin(s) * np.cos(s) * _dsigma(scheme, det, theta)
    return (np.minimum(p0, 1.0 - p0) >= p_floor) & (np.abs(dp0) >= slope_floor * scheme.gamma_rate)
