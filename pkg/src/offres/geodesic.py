"""Geodesics of the one-dimensional Fisher metric ds = ½√F dθ.

The equation θ'' + (F'/2F) θ'² = 0 is written per scheme in the reduced
form θ'' = [−Σ''/Σ' + (1−𝒜) Σ' tanΣ / (1 − 𝒜 sin²Σ)] θ'², which exposes
the tangent poles where F vanishes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as sp_integrate

from .errors import InvalidArgumentError, SingularityError, StepUnderflowError
from .fisher import _closed, _root_fisher
from .integrate import dopri5
from .schemes import Detuning, DrivingKind, DrivingScheme, _dsigma, _sigma

__all__ = [
    "GeodesicState",
    "GeodesicTrajectory",
    "DEFAULT_XI_SPAN",
    "POLE_EPS",
    "geodesic_acceleration",
    "geodesic_speed",
    "integrate_geodesic",
    "constraint_residual",
]

DEFAULT_XI_SPAN = (0.0, 3.0)
DEFAULT_TOL = (1e-10, 1e-10)
POLE_EPS = 1e-9
# an underflowing step is reported as a singularity when it happens this close
# to a pole, or once √F has collapsed by this factor (θ → ∞ in finite ξ)
POLE_CAPTURE = 1e-3
COLLAPSE_RATIO = 1e-3


@dataclass(frozen=True)
class GeodesicState:
    xi: float
    theta: float
    theta_dot: float


@dataclass
class GeodesicTrajectory:
    """Dense samples (ξ, θ, θ', v) of one integrated geodesic."""

    xi: np.ndarray
    theta: np.ndarray
    theta_dot: np.ndarray
    speed: np.ndarray
    scheme: DrivingScheme
    det: Detuning
    tolerances: tuple[float, float] = DEFAULT_TOL
    truncated: bool = False
    singular_theta: float | None = None
    domain_warning: bool = False
    n_steps: int = field(default=0, repr=False)

    def __len__(self) -> int:
        return len(self.xi)

    @property
    def a0(self) -> float:
        """Integration constant √F(θ₀)·θ'₀ of the implicit arc-length relation."""
        return float(math.sqrt(_closed(self.scheme, self.det, self.theta[0])) * self.theta_dot[0])

    def speed_drift(self) -> float:
        """max |v(ξ) − v(ξ₀)| / v(ξ₀), or 0 for a stationary path."""
        v0 = self.speed[0]
        if v0 == 0:
            return 0.0
        return float(np.max(np.abs(self.speed - v0)) / v0)


def _pole_distance(arg) -> np.ndarray:
    # distance of arg to the nearest odd multiple of π/2
    r = np.mod(np.asarray(arg, dtype=float) - 0.5 * math.pi, math.pi)
    return np.minimum(r, math.pi - r)


def _tan_args(scheme: DrivingScheme, det: Detuning, theta: float) -> list[float]:
    args = []
    if not det.on_resonance:
        args.append(float(_sigma(scheme, det, theta)))
    if scheme.kind is DrivingKind.OSCILLATORY:
        args.append(scheme.lam * theta)
    return args


def _check_poles(scheme: DrivingScheme, det: Detuning, theta: float, eps: float = POLE_EPS) -> None:
    for arg in _tan_args(scheme, det, theta):
        if _pole_distance(arg) < eps:
            raise SingularityError(
                f"geodesic equation singular at theta={theta!r} ({scheme.kind.value}, beta0={det.beta0})",
                theta=theta,
            )


def _coefficient(scheme: DrivingScheme, det: Detuning, theta: float) -> float:
    """Closed-form Christoffel coefficient c(θ) with θ'' = c(θ) θ'²."""
    k = scheme.kind
    lam = scheme.lam
    if k is DrivingKind.CONSTANT:
        base = 0.0
    elif k is DrivingKind.OSCILLATORY:
        base = lam * math.tan(lam * theta)
    elif k is DrivingKind.POWER_LAW:
        base = 2.0 * lam / (1.0 + lam * theta)
    else:
        base = lam
    if det.on_resonance:
        return base
    amp = det.amp_factor
    s = float(_sigma(scheme, det, theta))
    ds = float(_dsigma(scheme, det, theta))
    return base + (1.0 - amp) * ds * math.tan(s) / (1.0 - amp * math.sin(s) ** 2)


def _coefficient_generic(scheme: DrivingScheme, det: Detuning, theta: float, h: float = 1e-5) -> float:
    """−F'/(2F) with analytic F and a Richardson central difference for F'."""
    def F(x):
        return float(_closed(scheme, det, x))

    d1 = (F(theta + h) - F(theta - h)) / (2 * h)
    d2 = (F(theta + h / 2) - F(theta - h / 2)) / h
    dF = (4 * d2 - d1) / 3
    return -dF / (2.0 * F(theta))


def geodesic_acceleration(scheme: DrivingScheme, det: Detuning, state: GeodesicState,
                          method: str = "closed") -> float:
    """d²θ/dξ² at ``state``; ``method="generic"`` uses the numeric dF/dθ fallback."""
    theta, theta_dot = float(state.theta), float(state.theta_dot)
    if not (math.isfinite(theta) and math.isfinite(theta_dot)):
        raise InvalidArgumentError("geodesic state must be finite")
    _check_poles(scheme, det, theta)
    if method == "closed":
        c = _coefficient(scheme, det, theta)
    elif method == "generic":
        c = _coefficient_generic(scheme, det, theta)
    else:
        raise InvalidArgumentError(f"unknown method {method!r}")
    return c * theta_dot * theta_dot


def geodesic_speed(scheme: DrivingScheme, det: Detuning, theta, theta_dot):
    """v = ½√F(θ)·|θ'|, with √F taken in factored form (no cancellation near F = 0)."""
    v = 0.5 * _root_fisher(scheme, det, np.asarray(theta, dtype=float)) * np.abs(theta_dot)
    return v[()] if isinstance(v, np.ndarray) and v.ndim == 0 else v


def integrate_geodesic(
    scheme: DrivingScheme,
    det: Detuning,
    theta0: float,
    theta_dot0: float,
    xi_span: tuple[float, float] = DEFAULT_XI_SPAN,
    tol: tuple[float, float] = DEFAULT_TOL,
    xi_eval=None,
    n_samples: int = 301,
    on_singularity: str = "raise",
) -> GeodesicTrajectory:
    """Integrate the geodesic through (θ₀, θ'₀) and sample it densely.

    ``tol`` is ``(atol, rtol)``. With ``on_singularity="truncate"`` a pole
    ends the trajectory early instead of raising; the returned trajectory is
    marked ``truncated``. Otherwise the ``SingularityError`` carries the
    partial trajectory in ``.partial``.
    """
    if on_singularity not in ("raise", "truncate"):
        raise InvalidArgumentError("on_singularity must be 'raise' or 'truncate'")
    xi0, xi1 = map(float, xi_span)
    if not xi1 > xi0:
        raise InvalidArgumentError("xi_span must be a nonempty increasing interval")
    if not (math.isfinite(theta0) and math.isfinite(theta_dot0)):
        raise InvalidArgumentError("initial data must be finite")
    if xi_eval is None:
        xi_eval = np.linspace(xi0, xi1, n_samples)
    xi_eval = np.asarray(xi_eval, dtype=float)
    atol, rtol = tol

    def rhs(_xi, y):
        theta, theta_dot = y
        _check_poles(scheme, det, theta)
        return np.array([theta_dot, _coefficient(scheme, det, theta) * theta_dot * theta_dot])

    def build(t, y, truncated=False, singular=None):
        theta = y[:, 0]
        theta_dot = y[:, 1]
        return GeodesicTrajectory(
            xi=t, theta=theta, theta_dot=theta_dot,
            speed=np.asarray(geodesic_speed(scheme, det, theta, theta_dot)),
            scheme=scheme, det=det, tolerances=(atol, rtol),
            truncated=truncated, singular_theta=singular,
            domain_warning=not scheme.in_domain(theta),
        )

    _check_poles(scheme, det, float(theta0))
    try:
        sol = dopri5(rhs, (xi0, xi1), [theta0, theta_dot0], t_eval=xi_eval, rtol=rtol, atol=atol)
    except (SingularityError, StepUnderflowError) as exc:
        y_last = exc.y if exc.y is not None else np.array([theta0, theta_dot0])
        theta_last = float(y_last[0])
        if isinstance(exc, StepUnderflowError):
            near = [_pole_distance(a) for a in _tan_args(scheme, det, theta_last)]
            collapsed = _closed(scheme, det, theta_last) < COLLAPSE_RATIO ** 2 * _closed(scheme, det, theta0)
            if not collapsed and (not near or min(near) > POLE_CAPTURE):
                raise
            exc = SingularityError(
                f"geodesic reached a pole near theta={theta_last!r} at xi={exc.t!r}",
                theta=theta_last, t=exc.t, y=exc.y, partial=exc.partial,
            )
        part = exc.partial
        traj = build(part.t, part.y, truncated=True, singular=theta_last)
        if on_singularity == "truncate":
            return traj
        exc.partial = traj
        raise exc
    traj = build(sol.t, sol.y)
    traj.n_steps = sol.n_steps
    return traj


def constraint_residual(traj: GeodesicTrajectory) -> float:
    """max over samples of |∫_{θ(ξ₀)}^{θ(ξ)} √F dθ − a₀(ξ − ξ₀)|.

    The θ-integral is accumulated sample to sample by adaptive quadrature;
    a segment where θ turns around is integrated along ξ as ∫√F|θ'|dξ.
    """
    if len(traj) < 2:
        raise InvalidArgumentError("trajectory needs at least two samples")
    scheme, det = traj.scheme, traj.det

    def root_f(x):
        return math.sqrt(max(float(_closed(scheme, det, x)), 0.0))

    a0 = traj.a0
    monotone = np.all(np.diff(traj.theta) >= 0) or np.all(np.diff(traj.theta) <= 0)
    length = 0.0
    worst = 0.0
    for i in range(1, len(traj)):
        if monotone:
            piece, _ = sp_integrate.quad(root_f, traj.theta[i - 1], traj.theta[i], epsabs=1e-15, epsrel=1e-13, limit=200)
        else:
            # |θ'| is only known at the samples: trapezoid on the segment
            f0 = root_f(traj.theta[i - 1]) * abs(traj.theta_dot[i - 1])
            f1 = root_f(traj.theta[i]) * abs(traj.theta_dot[i])
            piece = 0.5 * (f0 + f1) * (traj.xi[i] - traj.xi[i - 1]) * math.copysign(1.0, a0 or 1.0)
        length += piece
        worst = max(worst, abs(length - a0 * (traj.xi[i] - traj.xi[0])))
    return worst
