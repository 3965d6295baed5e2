"""Driving schemes, detuning, pulse areas and transition probabilities.

All rates are expressed in the reduced variable ``gamma_rate`` = Γ/ħ, so the
temporal parameter ``theta`` and the elapsed time ``t`` are interchangeable.
Every function accepts scalars or numpy arrays for the time argument.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "DomainWarning",
    "DrivingKind",
    "DrivingScheme",
    "Detuning",
    "DEFAULT_GAMMA_RATE",
    "DEFAULT_LAMBDA",
    "amplitude_factor",
    "rabi_rate",
    "detuning_beta0",
    "pulse_area",
    "omega_H",
    "sigma",
    "success_probability",
    "failure_probability",
    "all_schemes",
]

DEFAULT_GAMMA_RATE = 1.0
DEFAULT_LAMBDA = 2.0 / math.pi


class DomainWarning(UserWarning):
    """Oscillatory drive evaluated past the quarter period where cos(λt) > 0."""


class DrivingKind(str, Enum):
    CONSTANT = "constant"
    OSCILLATORY = "oscillatory"
    POWER_LAW = "power-law-decay"
    EXPONENTIAL = "exponential-decay"

    @classmethod
    def parse(cls, name: str) -> "DrivingKind":
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "const": cls.CONSTANT,
            "osc": cls.OSCILLATORY,
            "power-law": cls.POWER_LAW,
            "powerlaw": cls.POWER_LAW,
            "pld": cls.POWER_LAW,
            "powerlawdecay": cls.POWER_LAW,
            "exponential": cls.EXPONENTIAL,
            "exp": cls.EXPONENTIAL,
            "exponentialdecay": cls.EXPONENTIAL,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise InvalidArgumentError(f"unknown driving scheme {name!r}; expected one of {names}") from None


@dataclass(frozen=True)
class DrivingScheme:
    """One of the four transverse-field envelopes with its rate parameters.

    ``gamma_rate`` is Γ/ħ and ``lam`` the envelope rate λ (ignored by the
    constant drive, required by the other three).
    """

    kind: DrivingKind
    gamma_rate: float = DEFAULT_GAMMA_RATE
    lam: float | None = None

    def __post_init__(self) -> None:
        kind = self.kind if isinstance(self.kind, DrivingKind) else DrivingKind.parse(str(self.kind))
        object.__setattr__(self, "kind", kind)
        if not (math.isfinite(self.gamma_rate) and self.gamma_rate > 0):
            raise InvalidArgumentError(f"gamma_rate must be positive and finite, got {self.gamma_rate}")
        if kind is not DrivingKind.CONSTANT:
            if self.lam is None or not (math.isfinite(self.lam) and self.lam > 0):
                raise InvalidArgumentError(f"{kind.value} drive needs a positive lambda, got {self.lam}")

    @classmethod
    def of(cls, kind: DrivingKind | str, gamma_rate: float = DEFAULT_GAMMA_RATE,
           lam: float = DEFAULT_LAMBDA) -> "DrivingScheme":
        """Build a scheme, dropping ``lam`` for the constant drive."""
        kind = kind if isinstance(kind, DrivingKind) else DrivingKind.parse(kind)
        return cls(kind, gamma_rate, None if kind is DrivingKind.CONSTANT else lam)

    @property
    def domain_end(self) -> float:
        """Upper end of the interval on which the envelope stays nonnegative."""
        if self.kind is DrivingKind.OSCILLATORY:
            return 0.5 * math.pi / self.lam
        return math.inf

    def in_domain(self, theta) -> bool:
        return bool(np.all(np.asarray(theta) <= self.domain_end))

    def check_domain(self, theta) -> bool:
        """Warn (never raise) when ``theta`` leaves the nominal domain."""
        ok = self.in_domain(theta)
        if not ok:
            warnings.warn(
                f"oscillatory drive evaluated beyond theta = {self.domain_end:.6g}",
                DomainWarning,
                stacklevel=3,
            )
        return ok


def all_schemes(gamma_rate: float = DEFAULT_GAMMA_RATE, lam: float = DEFAULT_LAMBDA) -> list[DrivingScheme]:
    return [DrivingScheme.of(kind, gamma_rate, lam) for kind in DrivingKind]


def _check_beta0(beta0: float) -> float:
    beta0 = float(beta0)
    if not math.isfinite(beta0) or beta0 < 0:
        raise InvalidArgumentError(f"beta0 must be finite and nonnegative, got {beta0}")
    return beta0


def amplitude_factor(beta0: float) -> float:
    """Lorentzian damping 1/(1+β₀²) of the maximal transfer probability."""
    beta0 = _check_beta0(beta0)
    return 1.0 / (1.0 + beta0 * beta0)


def rabi_rate(beta0: float, gamma_rate: float) -> float:
    """Effective Rabi rate √(1+β₀²)·Γ/ħ."""
    beta0 = _check_beta0(beta0)
    if not (math.isfinite(gamma_rate) and gamma_rate > 0):
        raise InvalidArgumentError(f"gamma_rate must be positive, got {gamma_rate}")
    return math.sqrt(1.0 + beta0 * beta0) * gamma_rate


@dataclass(frozen=True)
class Detuning:
    """Constant off-resonance parameter β₀."""

    beta0: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta0", _check_beta0(self.beta0))

    @property
    def amp_factor(self) -> float:
        return 1.0 / (1.0 + self.beta0 * self.beta0)

    @property
    def rate_factor(self) -> float:
        return math.sqrt(1.0 + self.beta0 * self.beta0)

    @property
    def on_resonance(self) -> bool:
        return self.beta0 == 0.0


def detuning_beta0(phi_dot, Omega, omega_H: float, hbar: float = 1.0):
    """Instantaneous detuning (ħ/2ω_H)(φ̇ + 2Ω/ħ)."""
    if hbar <= 0:
        raise InvalidArgumentError(f"hbar must be positive, got {hbar}")
    omega_H = np.asarray(omega_H, dtype=float)
    if np.any(omega_H == 0):
        raise ZeroDivisionError("transverse field intensity omega_H is zero")
    out = (hbar / (2.0 * omega_H)) * (np.asarray(phi_dot) + 2.0 * np.asarray(Omega) / hbar)
    return out[()] if out.ndim == 0 else out


def _theta(theta):
    arr = np.asarray(theta, dtype=float)
    if np.any(~np.isfinite(arr)):
        raise InvalidArgumentError("theta must be finite")
    if np.any(arr < 0):
        raise InvalidArgumentError("theta must be nonnegative")
    return arr


def _scalar(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


# Unvalidated kernels shared with fisher/geodesic, which may step outside
# theta >= 0 while probing derivatives.

def _envelope(scheme: DrivingScheme, t):
    k = scheme.kind
    if k is DrivingKind.CONSTANT:
        return np.ones_like(t, dtype=float)
    lam = scheme.lam
    if k is DrivingKind.OSCILLATORY:
        return np.cos(lam * t)
    if k is DrivingKind.POWER_LAW:
        u = 1.0 + lam * t
        return 1.0 / (u * u)
    return np.exp(-lam * t)


def _area(scheme: DrivingScheme, t):
    k = scheme.kind
    g = scheme.gamma_rate
    if k is DrivingKind.CONSTANT:
        return g * t
    lam = scheme.lam
    if k is DrivingKind.OSCILLATORY:
        return g / lam * np.sin(lam * t)
    if k is DrivingKind.POWER_LAW:
        return g / lam * (1.0 - 1.0 / (1.0 + lam * t))
    return g / lam * -np.expm1(-lam * t)


def _sigma(scheme: DrivingScheme, det: Detuning, t):
    return det.rate_factor * _area(scheme, t)


def _dsigma(scheme: DrivingScheme, det: Detuning, t):
    return det.rate_factor * scheme.gamma_rate * _envelope(scheme, t)


def _p0(scheme: DrivingScheme, det: Detuning, t):
    return det.amp_factor * np.sin(_sigma(scheme, det, t)) ** 2


def omega_H(scheme: DrivingScheme, t, gamma: float):
    """Transverse field intensity ω_H(t) in the energy units of ``gamma``."""
    t = _theta(t)
    scheme.check_domain(t)
    return _scalar(gamma * _envelope(scheme, t))


def pulse_area(scheme: DrivingScheme, theta):
    """Closed-form ∫₀^θ ω_H(t)/ħ dt."""
    theta = _theta(theta)
    scheme.check_domain(theta)
    return _scalar(_area(scheme, theta))


def sigma(scheme: DrivingScheme, det: Detuning, theta):
    """Rabi angle Σ(θ) = √(1+β₀²) × pulse area."""
    theta = _theta(theta)
    scheme.check_domain(theta)
    return _scalar(_sigma(scheme, det, theta))


def success_probability(scheme: DrivingScheme, det: Detuning, theta):
    """p₀(θ) = 𝒜 sin²Σ(θ), the probability of reaching the target state."""
    theta = _theta(theta)
    scheme.check_domain(theta)
    return _scalar(_p0(scheme, det, theta))


def failure_probability(scheme: DrivingScheme, det: Detuning, theta):
    return _scalar(1.0 - np.asarray(success_probability(scheme, det, theta)))
