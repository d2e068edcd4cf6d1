"""Real-root classification of fixed-time cubics and the bridge predicate.

The number of distinct real roots of P(z) = a z**3 + b z**2 + c z + d is
decided by the cubic discriminant

    Delta = 18abcd - 4 b**3 d + b**2 c**2 - 4 a c**3 - 27 a**2 d**2,

with the standard convention Delta > 0 <=> three distinct real roots,
Delta < 0 <=> one real root, Delta = 0 <=> repeated root.  Applied to the
discriminant surface Disc(z, t), "exactly one real root" means the set
{Disc >= 0} contains an unbounded half-line: the invariant tube is open and
``bridge_q`` is true.

Near Delta = 0 the classification is deliberately left undecided (the
``boundary`` flag): the zero set is exactly the window boundary, which the
scanner refines by bisection instead of trusting a pointwise sign.

``sturm_count_real_roots`` is an unrelated root counter (sign variations of
the Sturm chain) kept as an independent cross-check of the discriminant
convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .invariant import CubicPoly, InvariantModel

__all__ = [
    "RootClassification",
    "DegenerateCubicError",
    "cubic_discriminant",
    "degeneracy_band",
    "real_roots",
    "sturm_count_real_roots",
    "bridge_q",
]

# |a| below this fraction of the largest coefficient is reported, not reclassified
_LEADING_TOL = 1e-13

# |Delta| below this fraction of its largest term is the boundary band
_BAND_TOL = 1e-12


class DegenerateCubicError(ValueError):
    """Leading coefficient too small relative to the others to classify."""


def _check_leading(P: CubicPoly) -> None:
    scale = np.maximum(np.maximum(np.abs(P.a), np.abs(P.b)),
                       np.maximum(np.abs(P.c), np.abs(P.d)))
    if np.any(np.abs(P.a) <= _LEADING_TOL * scale) or np.any(scale == 0):
        raise DegenerateCubicError(
            "leading coefficient is negligible relative to the other "
            "coefficients; not a classifiable cubic")


def cubic_discriminant(P: CubicPoly):
    """Delta = 18abcd - 4b^3d + b^2c^2 - 4ac^3 - 27a^2d^2 (elementwise)."""
    _check_leading(P)
    a, b, c, d = P.a, P.b, P.c, P.d
    return (18.0 * a * b * c * d - 4.0 * b ** 3 * d + b ** 2 * c ** 2
            - 4.0 * a * c ** 3 - 27.0 * a ** 2 * d ** 2)


def degeneracy_band(P: CubicPoly):
    """Half-width of the |Delta| band treated as 'repeated root / boundary'.

    Scaled by the largest of the five discriminant terms so the band tracks
    the floating-point cancellation level of the Delta expression itself.
    """
    a, b, c, d = P.a, P.b, P.c, P.d
    terms = (np.abs(18.0 * a * b * c * d), np.abs(4.0 * b ** 3 * d),
             np.abs(b ** 2 * c ** 2), np.abs(4.0 * a * c ** 3),
             np.abs(27.0 * a ** 2 * d ** 2))
    scale = terms[0]
    for term in terms[1:]:
        scale = np.maximum(scale, term)
    return _BAND_TOL * scale


@dataclass(frozen=True)
class RootClassification:
    """Distinct real roots of a cubic, sorted ascending.

    count is 1 or 3 away from the boundary band; 2 (double + simple root) or
    1 (triple root) on it, with ``boundary`` set.
    """

    count: int
    roots: tuple[float, ...]
    discriminant: float
    boundary: bool


def _polish(P: CubicPoly, x: float, iterations: int = 3) -> float:
    for _ in range(iterations):
        dp = P.deriv(x)
        if dp == 0:
            break
        step = P(x) / dp
        x -= step
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return x


def _depressed(P: CubicPoly) -> tuple[float, float, float]:
    """Shift z = x - b/(3a): returns (shift, p, q) with x^3 + p x + q."""
    a, b, c, d = P.a, P.b, P.c, P.d
    shift = b / (3.0 * a)
    p = (3.0 * a * c - b ** 2) / (3.0 * a ** 2)
    q = (2.0 * b ** 3 - 9.0 * a * b * c + 27.0 * a ** 2 * d) / (27.0 * a ** 3)
    return shift, p, q


def _three_real_roots(P: CubicPoly) -> list[float]:
    """Trigonometric method; valid when Delta > 0 (then p < 0)."""
    shift, p, q = _depressed(P)
    m = 2.0 * np.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)  # = (3q)/(2p) * sqrt(-3/p)
    arg = min(1.0, max(-1.0, arg))
    theta = np.arccos(arg) / 3.0
    return [float(m * np.cos(theta - 2.0 * np.pi * k / 3.0) - shift)
            for k in range(3)]


def _single_real_root(P: CubicPoly) -> float:
    """Cardano's real root; valid when Delta < 0 (then q^2/4 + p^3/27 > 0)."""
    shift, p, q = _depressed(P)
    e = np.sqrt(q ** 2 / 4.0 + p ** 3 / 27.0)
    w = -q / 2.0 - np.copysign(e, q)  # magnitude-increasing combination
    u = np.cbrt(w)
    x = u - p / (3.0 * u) if u != 0 else 0.0
    return float(x - shift)


def real_roots(P: CubicPoly) -> RootClassification:
    """Classify and extract the distinct real roots of a scalar cubic.

    Closed-form roots (trigonometric for three real roots, Cardano plus the
    paired root otherwise) refined by Newton steps on the Horner form.
    Inside the degeneracy band the repeated-root formulas are used and the
    boundary flag is set.
    """
    if np.ndim(P.a) != 0:
        raise ValueError("real_roots expects a scalar cubic")
    delta = float(cubic_discriminant(P))
    band = float(degeneracy_band(P))
    a, b, c, d = P.a, P.b, P.c, P.d

    if abs(delta) <= band:
        d0 = b ** 2 - 3.0 * a * c
        d0_scale = b ** 2 + abs(3.0 * a * c)
        if abs(d0) <= 1e-12 * d0_scale or d0_scale == 0:
            # triple root
            root = float(-b / (3.0 * a))
            return RootClassification(1, (root,), delta, True)
        double = float((9.0 * a * d - b * c) / (2.0 * d0))
        simple = float((4.0 * a * b * c - 9.0 * a ** 2 * d - b ** 3) / (a * d0))
        simple = _polish(P, simple)
        roots = tuple(sorted((double, simple)))
        return RootClassification(2, roots, delta, True)

    if delta < 0:
        root = _polish(P, _single_real_root(P))
        return RootClassification(1, (root,), delta, False)

    roots = tuple(sorted(_polish(P, r) for r in _three_real_roots(P)))
    return RootClassification(3, roots, delta, False)


def _poly_rem(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Remainder of dense polynomial division, tiny leading terms trimmed."""
    rem = np.polydiv(num, den)[1]
    rem = np.atleast_1d(rem)
    scale = np.max(np.abs(rem)) if rem.size else 0.0
    keep = np.abs(rem) > 1e-12 * scale
    if not keep.any():
        return np.array([])
    return rem[np.argmax(keep):]


def sturm_count_real_roots(P: CubicPoly) -> int:
    """Count distinct real roots by Sturm-chain sign variations at -inf/+inf.

    Independent of the discriminant formula; used to pin down the sign
    convention of :func:`cubic_discriminant` on random cubics.
    """
    if np.ndim(P.a) != 0:
        raise ValueError("sturm_count_real_roots expects a scalar cubic")
    _check_leading(P)
    chain = [np.array([P.a, P.b, P.c, P.d], dtype=float),
             np.array([3.0 * P.a, 2.0 * P.b, P.c], dtype=float)]
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if rem.size == 0:
            break
        chain.append(-rem)

    def variations(at_minus_inf: bool) -> int:
        signs = []
        for poly in chain:
            degree = len(poly) - 1
            lead = poly[0]
            sign = np.sign(lead) * ((-1.0) ** degree if at_minus_inf else 1.0)
            if sign != 0:
                signs.append(sign)
        return int(np.sum(np.diff(signs) != 0)) if len(signs) > 1 else 0

    return variations(True) - variations(False)


def bridge_q(t: float, model: InvariantModel) -> bool:
    """True when the fixed-time cubic Disc(z, t) has exactly one real root.

    One real root leaves a connected half-line with Disc >= 0, i.e. an open
    channel to |z| -> infinity: a bridge window is open at time t.
    """
    return bool(cubic_discriminant(model.disc_cubic_at(t)) < 0)
