"""Reference numerical integration of the auxiliary and coupled systems.

These integrations are the ground truth against which the closed-form
perturbative pipeline is validated:

* ``integrate_y``       -- y''' + 4 y' = eps cos(t) y**(-5/2), state (y, y', y'').
* ``integrate_coupled`` -- the same plus z'' + z + g(t) z**2 = 0 with
                           g = y**(-5/2), state (y, y', y'', z, p), p = z'.

Initial conditions are (y0, 0, 0) for the y-block (matching the perturbative
expansion, whose first and second derivatives vanish at t = 0) and
(z0, 0) for the z-block.

Integration is delegated to scipy's embedded Runge-Kutta pairs with dense
output ("rk45" = Dormand-Prince 5(4), "dop853" = the 8th-order pair for
tight-tolerance conservation checks).  A fixed-step classical RK4 driver is
kept as a reproducibility fallback.  y''' is reconstructed from the equation
instead of being stored, so the y-state stays 3-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .perturbation import Params, PositivityError, YState

__all__ = [
    "Trajectory",
    "integrate_y",
    "integrate_coupled",
    "integrate_y_rk4",
    "sample",
    "ystate_at",
]

_METHODS = {"rk45": "RK45", "dop853": "DOP853"}

# dense-output polynomial degree per method (scipy's interpolants)
_DENSE_ORDER = {"rk45": 4, "dop853": 7, "rk4": 3}


@dataclass
class Trajectory:
    """Adaptive-integration result with dense output.

    times/states hold the accepted steps; ``dense`` interpolates between them
    with the integrator's own local order.  Immutable once built, safe to
    share across threads.
    """

    times: np.ndarray
    states: np.ndarray  # shape (len(times), dim), one row per node
    dense: Callable[[np.ndarray], np.ndarray]  # t -> (dim,) or (dim, m)
    interpolation_order: int
    params: Params = field(repr=False, default=Params())

    def __post_init__(self) -> None:
        if len(self.times) != len(self.states):
            raise ValueError("times and states length mismatch")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    @property
    def t_end(self) -> float:
        return float(self.times[-1])


def _rhs_y(eps: float):
    def rhs(t, s):
        y, dy, d2y = s
        return (dy, d2y, -4.0 * dy + eps * np.cos(t) * y ** -2.5)

    return rhs


def _rhs_coupled(eps: float):
    def rhs(t, s):
        y, dy, d2y, z, p = s
        g = y ** -2.5
        return (dy, d2y, -4.0 * dy + eps * np.cos(t) * g, p, -z - g * z * z)

    return rhs


def _validate(t_end: float, rel_tol: float, abs_tol: float, method: str) -> str:
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    for name, tol in (("rel_tol", rel_tol), ("abs_tol", abs_tol)):
        if not 0 < tol <= 1e-3:
            raise ValueError(f"{name} must lie in (0, 1e-3], got {tol}")
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(_METHODS)}")
    return _METHODS[method]


def _solve(rhs, s0, t_end, rel_tol, abs_tol, method, params) -> Trajectory:
    scipy_method = _validate(t_end, rel_tol, abs_tol, method)

    def y_floor(t, s):
        return s[0]

    y_floor.terminal = True
    y_floor.direction = -1

    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        s0,
        method=scipy_method,
        rtol=rel_tol,
        atol=abs_tol,
        dense_output=True,
        events=y_floor,
    )
    if sol.status == 1:
        raise PositivityError(
            f"y reached zero near t = {sol.t_events[0][0]:.6g}; "
            "the auxiliary equation left its positive domain"
        )
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    if np.any(sol.y[0] <= 0):
        raise PositivityError("integration produced a nonpositive y node")
    return Trajectory(
        times=sol.t,
        states=sol.y.T.copy(),
        dense=sol.sol,
        interpolation_order=_DENSE_ORDER[method],
        params=params,
    )


def integrate_y(params: Params, t_end: float, rel_tol: float = 1e-10,
                abs_tol: float = 1e-10, method: str = "rk45") -> Trajectory:
    """Integrate the auxiliary equation from (y0, 0, 0) up to t_end."""
    s0 = (params.y0, 0.0, 0.0)
    return _solve(_rhs_y(params.epsilon), s0, t_end, rel_tol, abs_tol, method, params)


def integrate_coupled(params: Params, t_end: float, rel_tol: float = 1e-10,
                      abs_tol: float = 1e-10, method: str = "rk45") -> Trajectory:
    """Integrate the coupled (y, z) system from (y0, 0, 0, z0, 0) up to t_end."""
    s0 = (params.y0, 0.0, 0.0, params.z0, 0.0)
    return _solve(_rhs_coupled(params.epsilon), s0, t_end, rel_tol, abs_tol, method, params)


def integrate_y_rk4(params: Params, t_end: float, step: float = 1e-3) -> Trajectory:
    """Fixed-step classical RK4 integration of the auxiliary equation.

    Deterministic step sequence for reproducibility comparisons; dense output
    is a cubic Hermite interpolant through the stored nodes.
    """
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    rhs = _rhs_y(params.epsilon)
    n = int(np.ceil(t_end / step))
    h = t_end / n
    ts = np.linspace(0.0, t_end, n + 1)
    states = np.empty((n + 1, 3))
    states[0] = (params.y0, 0.0, 0.0)
    s = states[0]
    for i in range(n):
        t = ts[i]
        k1 = np.asarray(rhs(t, s))
        k2 = np.asarray(rhs(t + h / 2, s + h / 2 * k1))
        k3 = np.asarray(rhs(t + h / 2, s + h / 2 * k2))
        k4 = np.asarray(rhs(t + h, s + h * k3))
        s = s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if s[0] <= 0:
            raise PositivityError(f"RK4 step produced y <= 0 near t = {ts[i + 1]:.6g}")
        states[i + 1] = s
    derivs = np.array([rhs(t, st) for t, st in zip(ts, states)])
    spline = CubicHermiteSpline(ts, states, derivs, axis=0)
    dense = lambda t: spline(t).T  # noqa: E731  (match OdeSolution's (dim, m) layout)
    return Trajectory(times=ts, states=states, dense=dense,
                      interpolation_order=_DENSE_ORDER["rk4"], params=params)


def sample(tr: Trajectory, t):
    """Evaluate a trajectory at time(s) t.

    Stored nodes are returned exactly as stored; other points use the dense
    interpolant.  t outside the integration span raises ValueError.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    tq = np.atleast_1d(t_arr)
    if np.any(tq < tr.times[0]) or np.any(tq > tr.times[-1]):
        raise ValueError(
            f"sample time outside trajectory span [{tr.times[0]:.6g}, {tr.times[-1]:.6g}]")
    out = np.asarray(tr.dense(tq), dtype=float).T  # (m, dim)
    idx = np.searchsorted(tr.times, tq)
    idx = np.clip(idx, 0, len(tr.times) - 1)
    exact = tr.times[idx] == tq
    if np.any(exact):
        out[exact] = tr.states[idx[exact]]
    return out[0] if scalar else out


def ystate_at(tr: Trajectory, t, params: Params) -> YState:
    """YState from a numerical trajectory, y''' reconstructed from the equation."""
    s = sample(tr, t)
    s2 = np.atleast_2d(s)
    y, dy, d2y = s2[:, 0], s2[:, 1], s2[:, 2]
    d3y = -4.0 * dy + params.epsilon * np.cos(np.atleast_1d(t)) * y ** -2.5
    if np.ndim(t) == 0:
        return YState(t=float(t), y=float(y[0]), dy=float(dy[0]),
                      d2y=float(d2y[0]), d3y=float(d3y[0]))
    return YState(t=np.asarray(t, dtype=float), y=y, dy=dy, d2y=d2y, d3y=d3y)
