"""Closed-form perturbative solution of the auxiliary oscillator.

The auxiliary variable y(t) obeys the driven third-order equation

    y''' + 4 y' = eps * cos(t) * y**(-5/2),        y(0) = y0, y'(0) = y''(0) = 0,

(normalized frequency, omega = 1).  Its second-order solution is carried in
exponential form,

    y(t) = y0 * exp(eps * rho1(t) + eps**2 * rho2(t)),

which keeps y(t) > 0 for every t, so the driver g(t) = y**(-5/2) stays real.
The plain polynomial truncation of the same series (``y_taylor``) is provided
for comparison; it does not protect positivity and degrades at late times.

rho2 contains the secular contribution (5/96) * t * sin(2t), which grows
linearly in t and drives the slow deformation of the invariant tube.  No
resummation is applied; the expansion is used as written even in long scans
(eps**2 * t of order one near t ~ 400 pi at eps = 0.08).

All functions are pure and accept scalar or ndarray time arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Params",
    "YState",
    "PositivityError",
    "rho1",
    "rho2",
    "rho_deriv",
    "y_exponential",
    "y_taylor",
    "y_taylor_state",
    "g_of_t",
]


class PositivityError(ValueError):
    """An operation required y > 0 but the supplied value was not positive."""


@dataclass(frozen=True)
class Params:
    """Physical parameter set.

    epsilon: strength of the cosine driver (>= 0).
    y0:      initial amplitude of the auxiliary variable (> 0).
    z0:      initial configuration amplitude of the z-equation.
    omega:   fixed at 1; other values are rejected (the general case is a
             rescaling of time and is not supported here).
    """

    epsilon: float = 0.08
    y0: float = 1.0
    z0: float = 0.25
    omega: float = 1.0

    def __post_init__(self) -> None:
        if self.y0 <= 0:
            raise ValueError(f"y0 must be positive, got {self.y0}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.omega != 1.0:
            raise ValueError(f"only the normalized frequency omega=1 is supported, got {self.omega}")


@dataclass(frozen=True)
class YState:
    """Value of the auxiliary variable and its first three derivatives at t."""

    t: float | np.ndarray
    y: float | np.ndarray
    dy: float | np.ndarray
    d2y: float | np.ndarray
    d3y: float | np.ndarray


def _check_y0(y0: float) -> None:
    if y0 <= 0:
        raise ValueError(f"y0 must be positive, got {y0}")


def rho1(t, y0: float = 1.0):
    """First-order profile, y0**(-7/2) * (sin(t)/3 - sin(2t)/6)."""
    _check_y0(y0)
    return y0 ** -3.5 * (np.sin(t) / 3.0 - np.sin(2.0 * t) / 6.0)


def rho2(t, y0: float = 1.0):
    """Second-order profile, including the secular term (5/96) t sin(2t)."""
    _check_y0(y0)
    return y0 ** -3.5 * (
        -5.0 / 288.0
        - np.cos(t) / 24.0
        + 19.0 / 288.0 * np.cos(2.0 * t)
        - np.cos(3.0 * t) / 72.0
        + np.cos(4.0 * t) / 144.0
        + 5.0 / 96.0 * t * np.sin(2.0 * t)
    )


def _rho1_d1(t):
    return np.cos(t) / 3.0 - np.cos(2.0 * t) / 3.0


def _rho1_d2(t):
    return -np.sin(t) / 3.0 + 2.0 / 3.0 * np.sin(2.0 * t)


def _rho1_d3(t):
    return -np.cos(t) / 3.0 + 4.0 / 3.0 * np.cos(2.0 * t)


def _rho2_d1(t):
    return (
        np.sin(t) / 24.0
        - 19.0 / 144.0 * np.sin(2.0 * t)
        + np.sin(3.0 * t) / 24.0
        - np.sin(4.0 * t) / 36.0
        + 5.0 / 96.0 * (np.sin(2.0 * t) + 2.0 * t * np.cos(2.0 * t))
    )


def _rho2_d2(t):
    return (
        np.cos(t) / 24.0
        - 19.0 / 72.0 * np.cos(2.0 * t)
        + np.cos(3.0 * t) / 8.0
        - np.cos(4.0 * t) / 9.0
        + 5.0 / 96.0 * (4.0 * np.cos(2.0 * t) - 4.0 * t * np.sin(2.0 * t))
    )


def _rho2_d3(t):
    return (
        -np.sin(t) / 24.0
        + 19.0 / 36.0 * np.sin(2.0 * t)
        - 3.0 / 8.0 * np.sin(3.0 * t)
        + 4.0 / 9.0 * np.sin(4.0 * t)
        + 5.0 / 96.0 * (-12.0 * np.sin(2.0 * t) - 8.0 * t * np.cos(2.0 * t))
    )


_RHO_DERIVS = {
    (1, 1): _rho1_d1,
    (1, 2): _rho1_d2,
    (1, 3): _rho1_d3,
    (2, 1): _rho2_d1,
    (2, 2): _rho2_d2,
    (2, 3): _rho2_d3,
}


def rho_deriv(which: int, order: int, t, y0: float = 1.0):
    """Exact time derivative of rho1 or rho2.

    Hand-derived closed forms (the secular term needs the product rule);
    numerical differentiation would be too noisy at late times where the
    secular contribution dominates the coefficients built from y''.
    """
    _check_y0(y0)
    try:
        fn = _RHO_DERIVS[(which, order)]
    except KeyError:
        raise ValueError(f"invalid derivative request which={which}, order={order}; "
                         "which must be 1 or 2, order must be 1, 2 or 3") from None
    return y0 ** -3.5 * fn(t)


def y_exponential(t, params: Params) -> YState:
    """Exponential second-order solution with derivatives up to third order.

    With u(t) = log(y0) + eps*rho1 + eps**2*rho2 the chain rule gives
    y' = y u', y'' = y (u'^2 + u''), y''' = y (u'^3 + 3 u' u'' + u''').
    y is strictly positive for every t.
    """
    eps = params.epsilon
    y0 = params.y0
    u1 = eps * rho_deriv(1, 1, t, y0) + eps ** 2 * rho_deriv(2, 1, t, y0)
    u2 = eps * rho_deriv(1, 2, t, y0) + eps ** 2 * rho_deriv(2, 2, t, y0)
    u3 = eps * rho_deriv(1, 3, t, y0) + eps ** 2 * rho_deriv(2, 3, t, y0)
    y = y0 * np.exp(eps * rho1(t, y0) + eps ** 2 * rho2(t, y0))
    return YState(
        t=t,
        y=y,
        dy=y * u1,
        d2y=y * (u1 ** 2 + u2),
        d3y=y * (u1 ** 3 + 3.0 * u1 * u2 + u3),
    )


def y_taylor(t, params: Params):
    """Plain second-order truncation y0*(1 + eps*rho1 + eps**2*(rho2 + rho1**2/2)).

    The rho1**2/2 cross term makes this the exact expansion of the
    exponential form through second order.  Positivity is not guaranteed.
    """
    eps = params.epsilon
    y0 = params.y0
    r1 = rho1(t, y0)
    return y0 * (1.0 + eps * r1 + eps ** 2 * (rho2(t, y0) + 0.5 * r1 ** 2))


def y_taylor_state(t, params: Params) -> YState:
    """Taylor-model counterpart of :func:`y_exponential` (full derivative set)."""
    eps = params.epsilon
    y0 = params.y0
    r1 = rho1(t, y0)
    d = {k: rho_deriv(1, k, t, y0) for k in (1, 2, 3)}
    e = {k: rho_deriv(2, k, t, y0) for k in (1, 2, 3)}
    y = y0 * (1.0 + eps * r1 + eps ** 2 * (rho2(t, y0) + 0.5 * r1 ** 2))
    dy = y0 * (eps * d[1] + eps ** 2 * (e[1] + r1 * d[1]))
    d2y = y0 * (eps * d[2] + eps ** 2 * (e[2] + d[1] ** 2 + r1 * d[2]))
    d3y = y0 * (eps * d[3] + eps ** 2 * (e[3] + 3.0 * d[1] * d[2] + r1 * d[3]))
    return YState(t=t, y=y, dy=dy, d2y=d2y, d3y=d3y)


def g_of_t(t, ystate: YState):
    """Driver of the z-equation, g = y**(-5/2).  Requires y > 0."""
    y = ystate.y
    if np.any(np.asarray(y) <= 0):
        raise PositivityError("g(t) = y**(-5/2) needs y > 0; got a nonpositive y "
                              "(possible with the Taylor model at late times)")
    return y ** -2.5
