"""Adaptive Dormand-Prince 5(4) integrator with sampled output.

One stepper serves both the real geodesic equations and the complex
amplitude equations. Error control follows Hairer, Nørsett & Wanner
(mixed absolute/relative RMS norm, local extrapolation); the continuous
extension is the usual fourth-order DOPRI5 interpolant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError, SingularityError, StepUnderflowError

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
# fifth- minus fourth-order weights, including the FSAL stage
E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
H_MIN = 1e-14


@dataclass
class OdeSolution:
    """Samples of an integration at the requested output points."""

    t: np.ndarray
    y: np.ndarray
    n_steps: int = 0
    n_rejected: int = 0
    n_evals: int = 0
    step_sizes: list = field(default_factory=list, repr=False)


def _rms_norm(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.abs(x) ** 2)))


def _initial_step(fun, t0, y0, f0, direction, rtol, atol) -> float:
    scale = atol + np.abs(y0) * rtol
    d0 = _rms_norm(y0 / scale)
    d1 = _rms_norm(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * direction * f0
    f1 = fun(t0 + h0 * direction, y1)
    d2 = _rms_norm((f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def dopri5(
    fun: Callable[[float, np.ndarray], np.ndarray],
    t_span: tuple[float, float],
    y0,
    t_eval=None,
    rtol: float = 1e-10,
    atol: float = 1e-10,
    h_min: float = H_MIN,
    max_step: float = np.inf,
    first_step: float | None = None,
    max_steps: int = 1_000_000,
    interpolate: bool = False,
) -> OdeSolution:
    """Integrate ``y' = fun(t, y)`` over ``t_span`` and sample at ``t_eval``.

    ``t_eval`` defaults to the two endpoints and must lie inside the span,
    ordered in the direction of integration. By default steps are shortened
    to land on every output point, so samples carry the full fifth-order
    accuracy; ``interpolate=True`` uses the cheaper fourth-order continuous
    extension instead. A ``SingularityError`` raised by
    ``fun`` during a trial stage rejects the step; if the step then shrinks
    below ``h_min`` the singularity is re-raised with the last accepted state.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (np.isfinite(t0) and np.isfinite(t1)):
        raise InvalidArgumentError("integration span must be finite")
    y = np.array(y0, dtype=complex if np.iscomplexobj(y0) else float).ravel()
    if t_eval is None:
        t_eval = np.array([t0, t1])
    t_eval = np.asarray(t_eval, dtype=float).ravel()
    direction = 1.0 if t1 >= t0 else -1.0
    if t_eval.size and (np.any(direction * (t_eval - t0) < 0) or np.any(direction * (t_eval - t1) > 0)):
        raise InvalidArgumentError("t_eval must lie within t_span")
    if t_eval.size > 1 and np.any(direction * np.diff(t_eval) < 0):
        raise InvalidArgumentError("t_eval must be ordered along the integration direction")

    out_y = np.empty((t_eval.size, y.size), dtype=y.dtype)
    n_out = 0
    while n_out < t_eval.size and t_eval[n_out] == t0:
        out_y[n_out] = y
        n_out += 1

    def partial():
        return OdeSolution(t_eval[:n_out].copy(), out_y[:n_out].copy(), n_steps, n_rejected, n_evals)

    n_steps = n_rejected = 0
    n_evals = 1
    t = t0
    f = np.asarray(fun(t, y))
    if t1 == t0:
        return OdeSolution(t_eval[:n_out], out_y[:n_out], 0, 0, n_evals)
    span = abs(t1 - t0)
    h = first_step if first_step is not None else _initial_step(fun, t0, y, f, direction, rtol, atol)
    n_evals += 1
    h = min(h, max_step, span)
    steps = []
    K = np.empty((7, y.size), dtype=y.dtype)

    while direction * (t1 - t) > 0:
        if n_steps + n_rejected >= max_steps:
            raise StepUnderflowError(f"exceeded {max_steps} steps at t={t}", t=t, y=y.copy(), partial=partial())
        h = min(h, max_step)
        if h < h_min and abs(t1 - t) > h_min:
            raise StepUnderflowError(f"step size {h:.3e} underflow at t={t}", t=t, y=y.copy(), partial=partial())
        target = t1
        if not interpolate and n_out < t_eval.size:
            target = t_eval[n_out]
        h_step = min(h, abs(target - t))
        clipped = h_step < h
        hs = h_step * direction
        K[0] = f
        try:
            for s in range(1, 6):
                K[s] = fun(t + C[s] * hs, y + hs * (A[s] @ K[:s]))
            y_new = y + hs * (B @ K[:6])
            t_new = t + hs
            if abs(target - t_new) <= 1e-15 * span:
                t_new = target
            f_new = np.asarray(fun(t_new, y_new))
            K[6] = f_new
            n_evals += 6
            err_vec = hs * (E @ K)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = _rms_norm(err_vec / scale)
            finite = np.all(np.isfinite(y_new)) and np.isfinite(err)
        except SingularityError as exc:
            n_evals += 6
            h = h_step * 0.25
            n_rejected += 1
            if h < h_min:
                exc.t, exc.y, exc.partial = t, y.copy(), partial()
                raise
            continue

        if not finite or err > 1.0:
            n_rejected += 1
            factor = MIN_FACTOR if not finite else max(MIN_FACTOR, SAFETY * err ** (-0.2))
            h = h_step * factor
            continue

        # every requested point inside (t, t_new]
        while n_out < t_eval.size and direction * (t_eval[n_out] - t_new) <= 0:
            if t_eval[n_out] == t_new:
                out_y[n_out] = y_new
            else:
                x = (t_eval[n_out] - t) / hs
                powers = np.array([x, x * x, x ** 3, x ** 4])
                out_y[n_out] = y + hs * ((P @ powers) @ K)
            n_out += 1

        steps.append(h_step)
        n_steps += 1
        t, y, f = t_new, y_new, f_new
        factor = MAX_FACTOR if err == 0 else min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err ** (-0.2)))
        # a step shortened to hit an output point says little about the next one
        h = max(h, h_step * factor) if clipped else h_step * factor

    while n_out < t_eval.size:
        out_y[n_out] = y
        n_out += 1
    return OdeSolution(t_eval, out_y, n_steps, n_rejected, n_evals, steps)
