"""Time-dependent invariant of the z-equation and its discriminant surface.

The z-equation z'' + z + g(t) z**2 = 0 with g = y**(-5/2) carries the
quadratic-in-momentum invariant

    I(z, p, t) = A1 z + A2 p + A3 z**2 + A4 z p + A5 p**2 + A6 z**3 = K,

with coefficients built from the auxiliary variable:

    A1 = (eps/2) sin t        A2 = (eps/2) cos t
    A3 = y + y''/2            A4 = -y'
    A5 = y                    A6 = (2/3) y**(-3/2)

and K = I(z0, 0, 0) fixed by the initial point (p(0) = 0 by convention).

For fixed t the relation is a quadratic in p; its discriminant

    Disc(z, t) = (A2 + A4 z)**2 - 4 A5 (A6 z**3 + A3 z**2 + A1 z - K)

is a cubic polynomial in z whose real-root structure decides whether the
invariant tube is closed or open at that instant.

The y-source is abstract: the same machinery runs on the exponential
perturbative model, the Taylor truncation, or an interpolated numerical
trajectory.  Everything is elementwise, so coefficient sets and cubics may
carry ndarray fields for whole time grids at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .odekit import Trajectory, ystate_at
from .perturbation import (
    Params,
    PositivityError,
    YState,
    y_exponential,
    y_taylor_state,
)

__all__ = [
    "CoefficientSet",
    "CubicPoly",
    "YSource",
    "exponential_source",
    "taylor_source",
    "numeric_source",
    "coefficients",
    "reference_constant",
    "invariant_value",
    "p_branches",
    "disc_value",
    "disc_cubic_coeffs",
    "InvariantModel",
]

YSource = Callable[[float | np.ndarray], YState]


def exponential_source(params: Params) -> YSource:
    """y-source backed by the positivity-preserving exponential model."""
    return lambda t: y_exponential(t, params)


def taylor_source(params: Params) -> YSource:
    """y-source backed by the plain second-order truncation (may lose positivity)."""
    return lambda t: y_taylor_state(t, params)


def numeric_source(trajectory: Trajectory, params: Params) -> YSource:
    """y-source sampling a numerically integrated trajectory (y in column 0)."""
    return lambda t: ystate_at(trajectory, t, params)


@dataclass(frozen=True)
class CoefficientSet:
    """The six invariant coefficients evaluated at time t."""

    t: float | np.ndarray
    a1: float | np.ndarray
    a2: float | np.ndarray
    a3: float | np.ndarray
    a4: float | np.ndarray
    a5: float | np.ndarray
    a6: float | np.ndarray


@dataclass(frozen=True)
class CubicPoly:
    """Real cubic a z**3 + b z**2 + c z + d (coefficients may be ndarrays)."""

    a: float | np.ndarray
    b: float | np.ndarray
    c: float | np.ndarray
    d: float | np.ndarray

    def __call__(self, z):
        """Horner evaluation at z."""
        return ((self.a * z + self.b) * z + self.c) * z + self.d

    def deriv(self, z):
        """Horner evaluation of the derivative 3a z**2 + 2b z + c."""
        return (3.0 * self.a * z + 2.0 * self.b) * z + self.c


def coefficients(ystate: YState, params: Params) -> CoefficientSet:
    """Coefficient set A1..A6 from a y-state; requires y > 0."""
    y = ystate.y
    if np.any(np.asarray(y) <= 0):
        raise PositivityError("invariant coefficients need y > 0 "
                              "(A6 involves y**(-3/2))")
    t = ystate.t
    half_eps = 0.5 * params.epsilon
    return CoefficientSet(
        t=t,
        a1=half_eps * np.sin(t),
        a2=half_eps * np.cos(t),
        a3=y + 0.5 * ystate.d2y,
        a4=-ystate.dy,
        a5=y,
        a6=(2.0 / 3.0) * y ** -1.5,
    )


def reference_constant(params: Params, ysource: YSource | None = None) -> float:
    """K = I(z0, 0, 0): the invariant level selected by the initial point.

    With p(0) = 0 only the A1, A3, A6 terms survive.  All supported y-sources
    share the initial data (y0, 0, 0), so K depends on params alone.
    """
    src = ysource if ysource is not None else exponential_source(params)
    c0 = coefficients(src(0.0), params)
    z0 = params.z0
    return float(c0.a1 * z0 + c0.a3 * z0 ** 2 + c0.a6 * z0 ** 3)


def invariant_value(z, p, coeffs: CoefficientSet, K: float):
    """I(z, p, t) - K; zero on the invariant surface."""
    return (
        coeffs.a1 * z
        + coeffs.a2 * p
        + coeffs.a3 * z ** 2
        + coeffs.a4 * z * p
        + coeffs.a5 * p ** 2
        + coeffs.a6 * z ** 3
        - K
    )


def disc_value(z, coeffs: CoefficientSet, K: float):
    """Discriminant of the invariant as a quadratic in p, factored form.

    (A2 + A4 z)**2 - 4 A5 (A6 z**3 + A3 z**2 + A1 z - K).  This grouping is
    the numerically preferred route near tongue tips, where the expanded
    cubic suffers cancellation.
    """
    lin = coeffs.a2 + coeffs.a4 * z
    bracket = ((coeffs.a6 * z + coeffs.a3) * z + coeffs.a1) * z - K
    return lin ** 2 - 4.0 * coeffs.a5 * bracket


def disc_cubic_coeffs(coeffs: CoefficientSet, K: float) -> CubicPoly:
    """Disc(z, t) at fixed t, expanded as a cubic in z.

    The leading coefficient -4 A5 A6 = -(8/3) y**(-1/2) is strictly negative
    for every positive y-source, so the cubic never degenerates.
    """
    return CubicPoly(
        a=-4.0 * coeffs.a5 * coeffs.a6,
        b=coeffs.a4 ** 2 - 4.0 * coeffs.a5 * coeffs.a3,
        c=2.0 * coeffs.a2 * coeffs.a4 - 4.0 * coeffs.a5 * coeffs.a1,
        d=coeffs.a2 ** 2 + 4.0 * coeffs.a5 * K,
    )


def p_branches(z: float, coeffs: CoefficientSet, K: float) -> tuple[float, ...]:
    """Real momentum branches p(z, t) on the invariant surface at fixed t.

    Solves A5 p**2 + (A2 + A4 z) p + (A6 z**3 + A3 z**2 + A1 z - K) = 0 with
    the cancellation-safe quadratic formula.  Returns two roots (ascending),
    one double root, or an empty tuple where Disc < 0.
    """
    a5 = coeffs.a5
    if not np.all(np.asarray(a5) > 0):
        raise ValueError("p_branches requires A5 = y > 0")
    disc = disc_value(z, coeffs, K)
    if disc < 0:
        return ()
    lin = coeffs.a2 + coeffs.a4 * z
    if disc == 0:
        return (float(-lin / (2.0 * a5)),)
    root = np.sqrt(disc)
    q = -0.5 * (lin + np.copysign(root, lin))
    const = ((coeffs.a6 * z + coeffs.a3) * z + coeffs.a1) * z - K
    p1 = q / a5
    p2 = const / q
    return tuple(sorted((float(p1), float(p2))))


@dataclass(frozen=True)
class InvariantModel:
    """A configured rupture-detection pipeline: params + y-source + K.

    One model commits to a single y-source; different sources are never mixed
    within one evaluation.  Instances are immutable and safe to share across
    workers.
    """

    params: Params
    ysource: YSource = field(repr=False)
    K: float
    name: str = "exp2"

    @classmethod
    def exponential(cls, params: Params) -> "InvariantModel":
        src = exponential_source(params)
        return cls(params=params, ysource=src, K=reference_constant(params, src),
                   name="exp2")

    @classmethod
    def taylor(cls, params: Params) -> "InvariantModel":
        src = taylor_source(params)
        return cls(params=params, ysource=src, K=reference_constant(params, src),
                   name="taylor2")

    @classmethod
    def numeric(cls, params: Params, trajectory: Trajectory) -> "InvariantModel":
        src = numeric_source(trajectory, params)
        return cls(params=params, ysource=src, K=reference_constant(params, src),
                   name="numeric")

    def coefficients_at(self, t) -> CoefficientSet:
        return coefficients(self.ysource(t), self.params)

    def disc_cubic_at(self, t) -> CubicPoly:
        return disc_cubic_coeffs(self.coefficients_at(t), self.K)

    def disc_at(self, z, t):
        return disc_value(z, self.coefficients_at(t), self.K)

    def p_branches_at(self, z: float, t: float) -> tuple[float, ...]:
        return p_branches(z, self.coefficients_at(t), self.K)

    def invariant_at(self, z, p, t):
        return invariant_value(z, p, self.coefficients_at(t), self.K)
