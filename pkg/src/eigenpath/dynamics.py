"""Vector fields, linear/nonlinear decomposition at the origin, and flows.

All systems are autonomous with their equilibrium at the origin; callers
with an equilibrium elsewhere must shift coordinates first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NonBracketedEvent, NonEquilibriumOrigin
from .integrate import EVENT, integrate_rk45

FD_STEP = 1e-6
EQUILIBRIUM_TOL = 1e-6

COMPLETED = "completed"
HIT_EVENT = "hit_event"
MAX_TIME_EXCEEDED = "max_time_exceeded"


@dataclass(frozen=True)
class VectorField:
    """Right-hand side of ``x' = f(x)`` with optional analytic Jacobian."""

    dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.eval(x)


@dataclass(frozen=True)
class LinearDecomposition:
    """Split ``f(x) = A x + f_n(x)`` with A the Jacobian at the origin."""

    A: np.ndarray
    nonlinear_part: Callable[[np.ndarray], np.ndarray]


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    exit_status: str                   # completed | hit_event | max_time_exceeded
    exit_time: float | None = None

    def final_state(self) -> np.ndarray:
        return self.states[-1]


def jacobian_at_origin(f: VectorField) -> np.ndarray:
    """Jacobian of f at 0; analytic when supplied, else central differences."""
    zero = np.zeros(f.dim)
    f0 = np.asarray(f.eval(zero), dtype=float)
    norm0 = float(np.linalg.norm(f0))
    if norm0 > EQUILIBRIUM_TOL:
        raise NonEquilibriumOrigin(f"|f(0)| = {norm0:.3e} exceeds {EQUILIBRIUM_TOL:.0e}")
    if f.jacobian is not None:
        return np.array(f.jacobian(zero), dtype=float)
    J = np.empty((f.dim, f.dim))
    for j in range(f.dim):
        e = np.zeros(f.dim)
        e[j] = FD_STEP
        J[:, j] = (np.asarray(f.eval(e)) - np.asarray(f.eval(-e))) / (2 * FD_STEP)
    return J


def decompose(f: VectorField) -> LinearDecomposition:
    """f(x) = A x + f_n(x) with f_n purely nonlinear (zero Jacobian at 0)."""
    A = jacobian_at_origin(f)

    def nonlinear_part(x: np.ndarray) -> np.ndarray:
        return np.asarray(f.eval(x)) - A @ x

    return LinearDecomposition(A=A, nonlinear_part=nonlinear_part)


def reverse(f: VectorField) -> VectorField:
    """Field of the time-reversed system, x' = -f(x)."""
    jac = None
    if f.jacobian is not None:
        orig_jac = f.jacobian
        jac = lambda x: -np.asarray(orig_jac(x))
    return VectorField(dim=f.dim, eval=lambda x: -np.asarray(f.eval(x)), jacobian=jac)


def _wrap_rhs(f: VectorField):
    def fun(t, y):
        return np.asarray(f.eval(y), dtype=float)
    return fun


def flow(f: VectorField, x0, T: float, tol: float = 1e-9, *,
         atol: float | None = None, norm_cap: float = 1e8) -> Trajectory:
    """Integrate the flow map s_T(x0) with per-step error below tol.

    T must be non-negative; integrate the reversed field for backward time.
    """
    if T < 0:
        raise ValueError("T must be >= 0; use reverse(f) for backward flow")
    if tol <= 0:
        raise ValueError("tol must be positive")
    x0 = np.asarray(x0, dtype=float)
    res = integrate_rk45(_wrap_rhs(f), x0, T, rtol=tol,
                         atol=tol * 1e-2 if atol is None else atol,
                         norm_cap=norm_cap, record=True)
    return Trajectory(times=res.times, states=res.states, exit_status=COMPLETED)


def radial_guard(f: VectorField, x0: np.ndarray, radius: float) -> None:
    """Reject starts on the event sphere or outside it under outward flow."""
    r0 = float(np.linalg.norm(x0))
    if abs(r0 - radius) <= 1e-12 * (1.0 + radius):
        raise NonBracketedEvent(f"initial state lies on the event sphere |x| = {radius}")
    if r0 > radius and float(x0 @ np.asarray(f.eval(x0))) > 0.0:
        raise NonBracketedEvent(
            f"initial radius {r0:.6g} exceeds event radius {radius:.6g} and the flow "
            "points outward; check the initial radius")


def flow_until(f: VectorField, x0, event_radius: float, t_max: float,
               tol: float = 1e-9, *, atol: float | None = None,
               norm_cap: float = 1e8) -> Trajectory:
    """Integrate until |x(t)| first crosses ``event_radius`` or t_max elapses.

    The crossing is localized by bisection on the bracketing step. Reaching
    t_max is reported via exit_status, not raised.
    """
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    x0 = np.asarray(x0, dtype=float)
    radial_guard(f, x0, event_radius)
    res = integrate_rk45(
        _wrap_rhs(f), x0, t_max, rtol=tol,
        atol=tol * 1e-2 if atol is None else atol,
        event=lambda y: float(np.linalg.norm(y)) - event_radius,
        event_tol=tol, norm_cap=norm_cap, record=True)
    if res.status == EVENT:
        return Trajectory(times=res.times, states=res.states,
                          exit_status=HIT_EVENT, exit_time=res.t)
    return Trajectory(times=res.times, states=res.states,
                      exit_status=MAX_TIME_EXCEEDED, exit_time=None)
