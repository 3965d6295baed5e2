"""Classical and quantum resonance curves, and the static detuning of a spin in fields."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc

from .errors import InvalidArgumentError, NoResonanceError

__all__ = [
    "ClassicalOscillator",
    "TwoLevelStatic",
    "CGS",
    "MKSA",
    "classical_resonance_curve",
    "classical_resonant_frequency",
    "quantum_resonance_curve",
    "quantum_resonant_frequency",
    "larmor_frequency",
    "static_beta0",
    "field_conversion",
    "fields_from_magnetic",
]

# Electron values. The Gaussian-form expressions below (m c / |e| B) are
# dimensionally consistent only in CGS; the MKSA table is offered for
# callers that supply their own conventions.
CGS = {
    "m": sc.m_e * 1e3,                      # g
    "c": sc.c * 1e2,                        # cm/s
    "e": -sc.e * sc.c * 10.0,               # statC
    "hbar": sc.hbar * 1e7,                  # erg s
}
MKSA = {
    "m": sc.m_e,
    "c": sc.c,
    "e": -sc.e,
    "hbar": sc.hbar,
}


@dataclass(frozen=True)
class ClassicalOscillator:
    """Driven damped spring m ẍ + damping·ẋ + k x = f0 cos γt."""

    m: float
    damping: float
    k: float
    f0: float = 1.0

    def __post_init__(self) -> None:
        if not (self.m > 0 and self.k > 0):
            raise InvalidArgumentError("mass and stiffness must be positive")
        if not self.damping >= 0:
            raise InvalidArgumentError("damping must be nonnegative")


@dataclass(frozen=True)
class TwoLevelStatic:
    E1: float
    E2: float
    coupling: float
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if not self.E2 > self.E1:
            raise InvalidArgumentError("E2 must exceed E1")
        if not (self.coupling > 0 and self.hbar > 0):
            raise InvalidArgumentError("coupling and hbar must be positive")

    @property
    def omega21(self) -> float:
        return (self.E2 - self.E1) / self.hbar


def classical_resonance_curve(osc: ClassicalOscillator, gamma_freq):
    """[(k − mγ²)² + damping²γ²]^{−1/2}; ``inf`` marks the undamped divergence."""
    g = np.asarray(gamma_freq, dtype=float)
    if np.any(~(g > 0)):
        raise InvalidArgumentError("driving frequency must be positive")
    denom = (osc.k - osc.m * g * g) ** 2 + (osc.damping * g) ** 2
    with np.errstate(divide="ignore"):
        out = 1.0 / np.sqrt(denom)
    return out[()] if out.ndim == 0 else out


def classical_resonant_frequency(osc: ClassicalOscillator) -> float:
    """√(k/m − damping²/(2m²))."""
    arg = osc.k / osc.m - osc.damping ** 2 / (2.0 * osc.m ** 2)
    if not arg > 0:
        raise NoResonanceError(f"no amplitude resonance: k/m - damping^2/(2m^2) = {arg:.6g} <= 0")
    return math.sqrt(arg)


def quantum_resonance_curve(sys: TwoLevelStatic, omega):
    """Lorentzian [1 + (ħ/γ)²(ω − ω₂₁)²/4]⁻¹, peak 1 at ω₂₁."""
    x = (sys.hbar / sys.coupling) * (np.asarray(omega, dtype=float) - sys.omega21)
    out = 1.0 / (1.0 + 0.25 * x * x)
    return out[()] if out.ndim == 0 else out


def quantum_resonant_frequency(sys: TwoLevelStatic) -> float:
    return sys.omega21


def larmor_frequency(B_par: float, m: float = CGS["m"], c: float = CGS["c"], e_abs: float = abs(CGS["e"])) -> float:
    """|e|B∥/(mc)."""
    return e_abs * B_par / (m * c)


def static_beta0(m: float, c: float, e_abs: float, B_perp: float, B_par: float, omega: float) -> float:
    """(mc/(|e|B⊥))·(ω − |e|B∥/(mc))."""
    if B_perp == 0:
        raise ZeroDivisionError("transverse field B_perp is zero")
    if B_perp < 0:
        raise InvalidArgumentError("B_perp is an intensity and must be positive")
    return (m * c / (e_abs * B_perp)) * (omega - e_abs * B_par / (m * c))


def field_conversion(omega_x, omega_y, Omega, m: float = CGS["m"], c: float = CGS["c"], e: float = CGS["e"],
                     hbar: float = CGS["hbar"]) -> tuple:
    """Magnetic components B_i = −(2mc/(eħ))·{ω_x, ω_y, Ω} from field energies."""
    s = -2.0 * m * c / (e * hbar)
    return (s * np.asarray(omega_x, dtype=float),
            s * np.asarray(omega_y, dtype=float),
            s * np.asarray(Omega, dtype=float))


def fields_from_magnetic(B_x, B_y, B_z, m: float = CGS["m"], c: float = CGS["c"], e: float = CGS["e"],
                         hbar: float = CGS["hbar"]) -> tuple:
    """Inverse of :func:`field_conversion`."""
    s = -(e * hbar) / (2.0 * m * c)
    return (s * np.asarray(B_x, dtype=float),
            s * np.asarray(B_y, dtype=float),
            s * np.asarray(B_z, dtype=float))
