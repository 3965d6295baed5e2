"""Brute-force check of the closed-form probabilities.

The amplitude equations iħα̇ = Ωα − ωβ*, iħβ̇ = ωα* + Ωβ are integrated
from α(0) = 1, β(0) = 0 with the Hamiltonian H = [[Ω, ω], [ω*, −Ω]] given
either in the rotating frame, where it is ω_H(t)(σ_x + β₀σ_z), or in the
lab frame with a chirped transverse phase that keeps β₀ constant.
Unitarity is measured after every integration and never renormalized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import IntegrationQualityError, InvalidArgumentError
from .integrate import dopri5
from .schemes import Detuning, DrivingScheme, _area, _envelope, _theta

__all__ = [
    "Amplitudes",
    "FieldRealization",
    "Frame",
    "DEFAULT_OMEGA0",
    "rotating_frame_hamiltonian",
    "lab_frame_fields",
    "evolve_amplitudes",
    "transition_probability_numeric",
    "source_transition_probability",
    "unitarity_defect",
]

DEFAULT_OMEGA0 = -1.0
DEFECT_BUDGET = 100.0


class Frame(str, Enum):
    ROTATING = "rotating"
    LAB = "lab"


@dataclass(frozen=True)
class Amplitudes:
    alpha: complex
    beta_amp: complex

    @property
    def success(self) -> float:
        """|β|², the population transferred to the target state."""
        return abs(self.beta_amp) ** 2


def unitarity_defect(amps: Amplitudes) -> float:
    return abs(abs(amps.alpha) ** 2 + abs(amps.beta_amp) ** 2 - 1.0)


def source_transition_probability(amps: Amplitudes, x: float) -> float:
    """Probability that a source with overlap ``x`` on the target ends at the target.

    |α|²x² + |β|²(1−x²) + (αβ* + α*β)·x√(1−x²)
    """
    x = float(x)
    if not (math.isfinite(x) and abs(x) <= 1.0):
        raise InvalidArgumentError(f"overlap must lie in [-1, 1], got {x}")
    a, b = complex(amps.alpha), complex(amps.beta_amp)
    cross = 2.0 * (a * b.conjugate()).real
    return abs(a) ** 2 * x * x + abs(b) ** 2 * (1.0 - x * x) + cross * x * math.sqrt(1.0 - x * x)


def _gamma_energy(scheme: DrivingScheme, hbar: float) -> float:
    return scheme.gamma_rate * hbar


def rotating_frame_hamiltonian(scheme: DrivingScheme, det: Detuning, t: float, hbar: float = 1.0) -> np.ndarray:
    """ω_H(t)·[[β₀, 1], [1, −β₀]] in energy units."""
    t = float(_theta(t))
    w = _gamma_energy(scheme, hbar) * float(_envelope(scheme, t))
    return np.array([[det.beta0 * w, w], [w, -det.beta0 * w]], dtype=complex)


@dataclass(frozen=True)
class FieldRealization:
    """Lab-frame fields: real Ω = −ħω₀/2 and ω(t) = ω_H(t)·e^{iφ(t)}.

    φ(t) = ω₀t + 2β₀·∫ω_H/ħ, so the instantaneous detuning stays at β₀.
    """

    scheme: DrivingScheme
    det: Detuning
    omega0: float
    hbar: float = 1.0

    def Omega(self, t) -> float:
        return -0.5 * self.hbar * self.omega0 + 0.0 * np.asarray(t, dtype=float)

    def omega_H(self, t):
        return _gamma_energy(self.scheme, self.hbar) * _envelope(self.scheme, np.asarray(t, dtype=float))

    def phi_omega(self, t):
        t = np.asarray(t, dtype=float)
        return self.omega0 * t + 2.0 * self.det.beta0 * _area(self.scheme, t)

    def phi_dot(self, t):
        return self.omega0 + 2.0 * self.det.beta0 * self.omega_H(t) / self.hbar

    def omega_complex(self, t):
        return self.omega_H(t) * np.exp(1j * self.phi_omega(t))

    def hamiltonian(self, t: float) -> np.ndarray:
        W = complex(self.omega_complex(t))
        Om = float(self.Omega(t))
        return np.array([[Om, W], [W.conjugate(), -Om]], dtype=complex)


def lab_frame_fields(scheme: DrivingScheme, det: Detuning, omega0: float = DEFAULT_OMEGA0,
                     hbar: float = 1.0) -> FieldRealization:
    if not (math.isfinite(omega0) and omega0 < 0):
        raise InvalidArgumentError(f"omega0 must be a negative real constant, got {omega0}")
    if not hbar > 0:
        raise InvalidArgumentError(f"hbar must be positive, got {hbar}")
    return FieldRealization(scheme, det, float(omega0), float(hbar))


def _rhs(hamiltonian: Callable[[float], np.ndarray], hbar: float):
    def f(t, y):
        H = hamiltonian(t)
        # taken as given: a non-Hermitian input shows up as a unitarity defect
        Om, W = H[0, 0], H[0, 1]
        a, b = y
        return np.array([
            -1j * (Om * a - W * b.conjugate()) / hbar,
            -1j * (W * a.conjugate() + Om * b) / hbar,
        ])
    return f


def _evolve(hamiltonian, t_eval: np.ndarray, tol: float, hbar: float) -> np.ndarray:
    t_final = float(t_eval[-1]) if t_eval.size else 0.0
    if t_final == 0.0:
        return np.tile(np.array([1.0 + 0j, 0j]), (t_eval.size, 1))
    sol = dopri5(_rhs(hamiltonian, hbar), (0.0, t_final), np.array([1.0 + 0j, 0j]),
                 t_eval=t_eval, rtol=tol, atol=tol)
    defect = np.abs(np.sum(np.abs(sol.y) ** 2, axis=1) - 1.0)
    worst = int(np.argmax(defect))
    if defect[worst] > DEFECT_BUDGET * tol:
        raise IntegrationQualityError(
            f"unitarity defect {defect[worst]:.3e} exceeds {DEFECT_BUDGET:g}×tol at t={t_eval[worst]}",
            t=float(t_eval[worst]), y=sol.y[worst],
        )
    return sol.y


def evolve_amplitudes(hamiltonian: Callable[[float], np.ndarray], t_final: float, tol: float = 1e-10,
                      hbar: float = 1.0) -> Amplitudes:
    """Integrate the amplitude equations for ``H(t)`` from 0 to ``t_final``.

    Raises ``IntegrationQualityError`` when |α|²+|β|² drifts from 1 by more
    than 100×tol.
    """
    t_final = float(t_final)
    if not (math.isfinite(t_final) and t_final >= 0):
        raise InvalidArgumentError(f"t_final must be finite and nonnegative, got {t_final}")
    y = _evolve(hamiltonian, np.array([t_final]), tol, hbar)[-1]
    return Amplitudes(complex(y[0]), complex(y[1]))


def transition_probability_numeric(scheme: DrivingScheme, det: Detuning, t, frame: Frame | str = Frame.ROTATING,
                                   tol: float = 1e-10, omega0: float = DEFAULT_OMEGA0, hbar: float = 1.0):
    """|β(t)|² from direct integration; ``t`` may be an ascending array of times."""
    frame = Frame(frame)
    t_arr = _theta(t)
    flat = np.atleast_1d(t_arr).ravel()
    if flat.size > 1 and np.any(np.diff(flat) < 0):
        raise InvalidArgumentError("times must be ascending")
    if frame is Frame.ROTATING:
        def H(s):
            return rotating_frame_hamiltonian(scheme, det, max(s, 0.0), hbar)
    else:
        H = lab_frame_fields(scheme, det, omega0, hbar).hamiltonian
    y = _evolve(H, flat, tol, hbar)
    p = (np.abs(y[:, 1]) ** 2).reshape(t_arr.shape)
    return p[()] if p.ndim == 0 else p
