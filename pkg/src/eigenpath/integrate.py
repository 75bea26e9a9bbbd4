"""Adaptive Dormand-Prince 5(4) stepping core.

One stepper serves both plain trajectory flows and the augmented systems
that carry a running path integral: the embedded error estimate then
controls quadrature error together with trajectory error, which is what
bounds the accuracy of everything computed downstream.

The right-hand side signature is ``fun(t, y) -> dy`` with ``y`` either a
float64 or complex128 vector; the tableau arithmetic is dtype-agnostic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import StateOverflow, StepSizeUnderflow

# Dormand-Prince 5(4): 7 stages, FSAL, 5th-order propagation.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b5 - b4: weights of the embedded error estimate.
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

MIN_STEP = 1e-14

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
# PI controller exponents (0.7/5, 0.4/5).
_ALPHA = 0.14
_BETA = 0.08

REACHED_END = "reached_end"
EVENT = "event"
MONITOR_STOP = "monitor_stop"


@dataclass
class IntegrationResult:
    status: str          # one of REACHED_END, EVENT, MONITOR_STOP
    t: float
    y: np.ndarray
    n_steps: int
    times: np.ndarray | None = None
    states: np.ndarray | None = None


def _error_norm(delta: np.ndarray, scale: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.abs(delta / scale) ** 2)))


def _initial_step(fun, t0, y0, f0, t_end, rtol, atol):
    """Hairer-style starting step: two cheap probes of the local scale."""
    scale = atol + rtol * np.abs(y0)
    d0 = float(np.sqrt(np.mean(np.abs(y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean(np.abs(f0 / scale) ** 2)))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_end - t0) if t_end > t0 else h0
    y1 = y0 + h0 * f0
    f1 = fun(t0 + h0, y1)
    d2 = float(np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return max(MIN_STEP * 10, min(100 * h0, h1, t_end - t0 if t_end > t0 else h1))


def _rk_step(fun, t, y, h, k0):
    """One full DP5(4) step; returns (y5, err_vec, k_stages)."""
    k = np.empty((7,) + y.shape, dtype=y.dtype)
    k[0] = k0
    for i in range(1, 7):
        yi = y + h * (_A[i] @ k[:i])
        k[i] = fun(t + _C[i] * h, yi)
    y_new = y + h * (_B5 @ k)
    err = h * (_E @ k)
    return y_new, err, k


def _propagate(fun, t, y, h):
    """Single uncontrolled 5th-order step, used to probe inside a bracketing step."""
    k0 = fun(t, y)
    y_new, _, _ = _rk_step(fun, t, y, h, k0)
    return y_new


def _bisect_event(fun, t, y, h, y_new, event, event_tol, min_iter):
    """Localize the event-sign change inside an accepted step by time bisection.

    Each probe re-steps from the left endpoint with a single 5th-order step,
    so no dense-output machinery is involved. Runs at least ``min_iter``
    rounds and continues until the time bracket is below ``event_tol``.
    """
    g_lo = event(y)
    lo, hi = 0.0, h
    y_hi = y_new
    it = 0
    while it < min_iter or (hi - lo) > event_tol:
        if it >= 64 or (hi - lo) <= MIN_STEP:
            break
        mid = 0.5 * (lo + hi)
        y_mid = _propagate(fun, t, y, mid)
        if g_lo * event(y_mid) <= 0.0:
            hi, y_hi = mid, y_mid
        else:
            lo = mid
        it += 1
    return t + hi, y_hi


def integrate_rk45(
    fun: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_end: float,
    rtol: float = 1e-9,
    atol: float = 1e-11,
    *,
    event: Callable[[np.ndarray], float] | None = None,
    event_tol: float = 0.0,
    event_min_iter: int = 12,
    monitor: Callable[[float, np.ndarray], bool] | None = None,
    cap_norm: Callable[[np.ndarray], float] | None = None,
    norm_cap: float = 1e8,
    record: bool = False,
    max_steps: int = 10_000_000,
) -> IntegrationResult:
    """Integrate ``y' = fun(t, y)`` from t=0 to ``t_end`` with adaptive steps.

    event:     scalar function of the state; integration stops at the first
               sign change between accepted steps, localized by bisection.
    monitor:   called after every accepted step; returning True stops the
               run with MONITOR_STOP status.
    cap_norm:  norm used for the blow-up guard (defaults to the 2-norm of y).

    Raises StepSizeUnderflow when the controller drops below MIN_STEP and
    StateOverflow when cap_norm exceeds ``norm_cap`` or y goes non-finite.
    """
    t = 0.0
    y = np.array(y0, copy=True)
    if y.ndim != 1:
        raise ValueError("y0 must be a 1-D vector")
    if t_end < 0:
        raise ValueError("t_end must be non-negative")

    times = [0.0] if record else None
    states = [y.copy()] if record else None

    if t_end == 0.0:
        return IntegrationResult(REACHED_END, 0.0, y, 0,
                                 np.array(times) if record else None,
                                 np.array(states) if record else None)

    f0 = fun(t, y)
    g_prev = event(y) if event is not None else None
    h = _initial_step(fun, t, y, f0, t_end, rtol, atol)
    err_prev = None
    n_steps = 0

    while t < t_end:
        h = min(h, t_end - t)
        if h < MIN_STEP:
            raise StepSizeUnderflow(f"step size {h:.3e} below {MIN_STEP:.0e} at t={t:.6g}")
        y_new, err_vec, k = _rk_step(fun, t, y, h, f0)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _error_norm(err_vec, scale)

        if not np.isfinite(err):
            # Non-finite trial: treat as a hard rejection.
            h *= 0.25
            if h < MIN_STEP:
                raise StateOverflow(f"state became non-finite near t={t:.6g}")
            continue

        if err > 1.0:
            fac = max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            h *= min(1.0, fac)
            continue

        n_steps += 1
        if n_steps > max_steps:
            raise RuntimeError("integrate_rk45 exceeded max_steps")

        t_new = t + h
        cap_val = cap_norm(y_new) if cap_norm is not None else float(np.linalg.norm(y_new))
        if not np.isfinite(cap_val) or cap_val > norm_cap:
            raise StateOverflow(
                f"state norm {cap_val:.3e} exceeded cap {norm_cap:.3e} at t={t_new:.6g}")

        if event is not None:
            g_new = event(y_new)
            if g_prev * g_new <= 0.0 and g_prev != g_new:
                t_ev, y_ev = _bisect_event(fun, t, y, h, y_new, event,
                                           max(event_tol, 0.0), event_min_iter)
                if record:
                    times.append(t_ev)
                    states.append(y_ev.copy())
                return IntegrationResult(EVENT, t_ev, y_ev, n_steps,
                                         np.array(times) if record else None,
                                         np.array(states) if record else None)
            g_prev = g_new

        if record:
            times.append(t_new)
            states.append(y_new.copy())

        t, y, f0 = t_new, y_new, k[6]  # FSAL

        if monitor is not None and monitor(t, y):
            return IntegrationResult(MONITOR_STOP, t, y, n_steps,
                                     np.array(times) if record else None,
                                     np.array(states) if record else None)

        if err == 0.0:
            fac = _MAX_FACTOR
        elif err_prev is None:
            fac = _SAFETY * err ** -0.2
        else:
            fac = _SAFETY * err ** -_ALPHA * err_prev ** _BETA
        h *= min(_MAX_FACTOR, max(_MIN_FACTOR, fac))
        err_prev = max(err, 1e-10)

    return IntegrationResult(REACHED_END, t, y, n_steps,
                             np.array(times) if record else None,
                             np.array(states) if record else None)
