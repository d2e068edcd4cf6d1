"""Algebraic rupture diagnostics for the invariant tube of a driven oscillator.

The pipeline, bottom up:

* :mod:`tuberupture.perturbation` -- positivity-preserving second-order
  solution of the auxiliary equation and its derivatives.
* :mod:`tuberupture.odekit`       -- reference numerical integration of the
  auxiliary and coupled systems (the validation oracle).
* :mod:`tuberupture.invariant`    -- the six invariant coefficients, the
  momentum branches, and the fixed-time discriminant cubic.
* :mod:`tuberupture.rootstructure`-- cubic real-root classification and the
  one-scalar bridge predicate (cubic discriminant < 0).
* :mod:`tuberupture.scanner`      -- time sweeps, window refinement, gap and
  width statistics, surface grids.
* :mod:`tuberupture.cli`          -- ``tuberupture`` command producing
  CSV/JSON/SVG artifacts.
"""

from .invariant import (
    CoefficientSet,
    CubicPoly,
    InvariantModel,
    coefficients,
    disc_cubic_coeffs,
    disc_value,
    invariant_value,
    p_branches,
    reference_constant,
)
from .odekit import Trajectory, integrate_coupled, integrate_y, sample, ystate_at
from .perturbation import (
    Params,
    PositivityError,
    YState,
    g_of_t,
    rho1,
    rho2,
    rho_deriv,
    y_exponential,
    y_taylor,
)
from .rootstructure import (
    DegenerateCubicError,
    RootClassification,
    bridge_q,
    cubic_discriminant,
    real_roots,
    sturm_count_real_roots,
)
from .scanner import (
    BridgeWindow,
    SpacingReport,
    SurfaceGrid,
    WindowCatalog,
    WidthTrend,
    scan_windows,
    spacing_analysis,
    surface_grid,
    width_trend,
)

__version__ = "0.1.0"

__all__ = [
    "Params",
    "YState",
    "PositivityError",
    "rho1",
    "rho2",
    "rho_deriv",
    "y_exponential",
    "y_taylor",
    "g_of_t",
    "Trajectory",
    "integrate_y",
    "integrate_coupled",
    "sample",
    "ystate_at",
    "CoefficientSet",
    "CubicPoly",
    "InvariantModel",
    "coefficients",
    "reference_constant",
    "invariant_value",
    "p_branches",
    "disc_value",
    "disc_cubic_coeffs",
    "RootClassification",
    "DegenerateCubicError",
    "cubic_discriminant",
    "real_roots",
    "sturm_count_real_roots",
    "bridge_q",
    "BridgeWindow",
    "WindowCatalog",
    "SpacingReport",
    "WidthTrend",
    "SurfaceGrid",
    "scan_windows",
    "spacing_analysis",
    "width_trend",
    "surface_grid",
    "__version__",
]
