"""Time sweeps of the bridge criterion and discriminant-surface grids.

``scan_windows`` evaluates the cubic discriminant Delta(t) of Disc(z, t) on a
uniform grid, brackets every sign change, refines the window boundaries by
bisection, and catalogs the resulting bridge windows.  ``spacing_analysis``
classifies the gaps between consecutive window midpoints as ~2pi or ~pi and
locates the period-halving transition; ``width_trend`` summarizes the slow
broadening of windows.  ``surface_grid`` rasterizes Disc and the momentum
branches over a (z, t) rectangle for surface plots.

Time grids are half-open: t0 + k*step for k = 0 .. ceil((t1-t0)/step)-1,
matching numpy.arange.  Grids may be partitioned across threads; every
evaluation is an elementwise pure function of t, so the merged result is
byte-identical to a sequential scan regardless of the partition.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .invariant import CoefficientSet, InvariantModel, disc_value
from .rootstructure import cubic_discriminant, degeneracy_band

__all__ = [
    "BridgeWindow",
    "WindowCatalog",
    "SpacingReport",
    "WidthTrend",
    "SurfaceGrid",
    "classify_gap",
    "discriminant_series",
    "scan_windows",
    "spacing_analysis",
    "width_trend",
    "surface_grid",
]

DEFAULT_STEP = np.pi / 200.0

# gap within this absolute distance of 2pi (resp. pi) joins that class
GAP_CLASS_TOL = 0.5


@dataclass(frozen=True)
class BridgeWindow:
    """Refined time interval on which the bridge criterion holds (Delta < 0)."""

    t_open: float
    t_close: float

    def __post_init__(self) -> None:
        if not self.t_open < self.t_close:
            raise ValueError(f"empty bridge window [{self.t_open}, {self.t_close}]")

    @property
    def width(self) -> float:
        return self.t_close - self.t_open

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.t_open + self.t_close)


@dataclass(frozen=True)
class WindowCatalog:
    """Time-ordered bridge windows found by one scan, plus the scan settings."""

    windows: tuple[BridgeWindow, ...]
    t_start: float
    t_end: float
    step: float
    refine_tol: float

    def __post_init__(self) -> None:
        for prev, cur in zip(self.windows, self.windows[1:]):
            if prev.t_close >= cur.t_open:
                raise ValueError("catalog windows must be disjoint and sorted")

    def __len__(self) -> int:
        return len(self.windows)

    @property
    def midpoints(self) -> np.ndarray:
        return np.array([w.midpoint for w in self.windows])

    @property
    def widths(self) -> np.ndarray:
        return np.array([w.width for w in self.windows])

    @property
    def gaps(self) -> np.ndarray:
        """Differences of consecutive window midpoints."""
        return np.diff(self.midpoints)


def _grid(t0: float, t1: float, step: float) -> np.ndarray:
    return np.arange(t0, t1, step)


def discriminant_series(model: InvariantModel, ts: np.ndarray,
                        workers: int = 1) -> np.ndarray:
    """Delta(t) on a time grid, optionally split across threads.

    Chunks are contiguous and merged in order; values are bit-identical to a
    single-threaded evaluation.
    """
    def evaluate(chunk: np.ndarray) -> np.ndarray:
        return np.asarray(cubic_discriminant(model.disc_cubic_at(chunk)))

    if workers <= 1 or len(ts) < 2 * workers:
        return evaluate(ts)
    chunks = np.array_split(ts, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(evaluate, chunks))
    return np.concatenate(parts)


def _delta_and_band(model: InvariantModel, t: float) -> tuple[float, float]:
    cubic = model.disc_cubic_at(t)
    return float(cubic_discriminant(cubic)), float(degeneracy_band(cubic))


def _refine_boundary(model: InvariantModel, t_lo: float, t_hi: float,
                     f_lo: float, ttol: float) -> float:
    """Bisect a Delta sign change down to ttol or into the degeneracy band."""
    while (t_hi - t_lo) > ttol:
        mid = 0.5 * (t_lo + t_hi)
        f_mid, band = _delta_and_band(model, mid)
        if abs(f_mid) <= band:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            t_lo, f_lo = mid, f_mid
        else:
            t_hi = mid
    return 0.5 * (t_lo + t_hi)


def _windows_from_grid(model: InvariantModel, ts: np.ndarray, delta: np.ndarray,
                       ttol: float) -> list[tuple[float, float]]:
    """Bracket negative runs of Delta on the grid and refine their edges."""
    neg = delta < 0
    if not neg.any():
        return []
    out = []
    n = len(ts)
    i = 0
    while i < n:
        if not neg[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and neg[j + 1]:
            j += 1
        t_open = (ts[0] if i == 0 else
                  _refine_boundary(model, ts[i - 1], ts[i], delta[i - 1], ttol))
        t_close = (ts[-1] if j == n - 1 else
                   _refine_boundary(model, ts[j], ts[j + 1], delta[j], ttol))
        out.append((float(t_open), float(t_close)))
        i = j + 1
    return out


def _sliver_rescan(model: InvariantModel, ts: np.ndarray, delta: np.ndarray,
                   ttol: float) -> list[tuple[float, float]]:
    """Re-scan at step/4 around positive grid-local minima whose parabolic
    continuation dips to (or below) the degeneracy band.

    Nascent windows are narrower than the default grid step; this guard
    catches slivers the base pass stepped over.
    """
    interior = np.flatnonzero(
        (delta[1:-1] > 0)
        & (delta[1:-1] < delta[:-2])
        & (delta[1:-1] <= delta[2:])
    ) + 1
    found: list[tuple[float, float]] = []
    for i in interior:
        d0, d1, d2 = delta[i - 1], delta[i], delta[i + 1]
        curvature = d0 - 2.0 * d1 + d2
        if curvature <= 0:
            continue
        vertex = d1 - (d0 - d2) ** 2 / (8.0 * curvature)
        band = _delta_and_band(model, ts[i])[1]
        if vertex > band:
            continue
        fine = np.linspace(ts[i - 1], ts[i + 1], 9)
        fine_delta = discriminant_series(model, fine)
        found.extend(_windows_from_grid(model, fine, fine_delta, ttol))
    return found


def scan_windows(t0: float, t1: float, step: float, model: InvariantModel,
                 workers: int = 1, sliver_guard: bool = True) -> WindowCatalog:
    """Sweep the bridge criterion over [t0, t1) and catalog the open windows.

    Every Delta sign change on the grid is refined by bisection to a time
    tolerance of 1e-10 * (t1 - t0) (or into the discriminant degeneracy
    band).  Runs that touch the scan edges are clamped to the grid ends.
    An empty catalog is a valid result.
    """
    if not t0 < t1:
        raise ValueError(f"need t0 < t1, got [{t0}, {t1}]")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    ts = _grid(t0, t1, step)
    if len(ts) < 2:
        raise ValueError("scan range shorter than one grid step")
    ttol = 1e-10 * (t1 - t0)
    delta = discriminant_series(model, ts, workers=workers)
    raw = _windows_from_grid(model, ts, delta, ttol)
    if sliver_guard:
        for extra in _sliver_rescan(model, ts, delta, ttol):
            if not any(lo <= extra[0] <= hi or lo <= extra[1] <= hi
                       for lo, hi in raw):
                raw.append(extra)
    raw.sort()
    windows = tuple(BridgeWindow(lo, hi) for lo, hi in raw)
    return WindowCatalog(windows=windows, t_start=t0, t_end=t1, step=step,
                         refine_tol=ttol)


@dataclass(frozen=True)
class SpacingReport:
    """Gap statistics of a window catalog.

    Each midpoint gap is classified as "2pi", "pi", or "other" (absolute
    tolerance ``class_tol``).  The transition time is the midpoint of the
    window opening the first run of at least three consecutive pi-gaps, or
    None when no such run exists.  ``alternation_fraction`` measures how
    consistently consecutive window widths alternate (1.0 = strictly
    alternating), evaluated from the transition onward when one is found.
    """

    gaps: np.ndarray
    classes: tuple[str, ...]
    n_two_pi: int
    n_pi: int
    n_other: int
    transition_index: int | None
    transition_time: float | None
    alternation_fraction: float
    class_tol: float


def classify_gap(gap: float, tol: float) -> str:
    if abs(gap - 2.0 * np.pi) <= tol:
        return "2pi"
    if abs(gap - np.pi) <= tol:
        return "pi"
    return "other"


def _alternation_fraction(widths: Sequence[float]) -> float:
    diffs = np.diff(widths)
    if len(diffs) < 2:
        return 0.0
    flips = diffs[:-1] * diffs[1:] < 0
    return float(np.mean(flips))


def spacing_analysis(catalog: WindowCatalog, class_tol: float = GAP_CLASS_TOL,
                     run_length: int = 3) -> SpacingReport:
    """Classify midpoint gaps and locate the 2pi -> pi spacing transition."""
    if len(catalog) < 4:
        raise ValueError(f"spacing analysis needs at least 4 windows, got {len(catalog)}")
    mids = catalog.midpoints
    gaps = np.diff(mids)
    classes = tuple(classify_gap(g, class_tol) for g in gaps)

    transition_index = None
    for i in range(len(classes) - run_length + 1):
        if all(c == "pi" for c in classes[i:i + run_length]):
            transition_index = i
            break
    transition_time = float(mids[transition_index]) if transition_index is not None else None

    widths = catalog.widths
    start = transition_index if transition_index is not None else 0
    alternation = _alternation_fraction(widths[start:])

    return SpacingReport(
        gaps=gaps,
        classes=classes,
        n_two_pi=sum(c == "2pi" for c in classes),
        n_pi=sum(c == "pi" for c in classes),
        n_other=sum(c == "other" for c in classes),
        transition_index=transition_index,
        transition_time=transition_time,
        alternation_fraction=alternation,
        class_tol=class_tol,
    )


@dataclass(frozen=True)
class WidthTrend:
    """Median window width of the first vs the last quartile of a catalog."""

    first_quartile_median: float
    last_quartile_median: float

    @property
    def ratio(self) -> float:
        return self.last_quartile_median / self.first_quartile_median


def width_trend(catalog: WindowCatalog) -> WidthTrend:
    """Broadening summary: median width, last quartile over first quartile."""
    n = len(catalog)
    if n < 4:
        raise ValueError(f"width trend needs at least 4 windows, got {n}")
    widths = catalog.widths
    q = max(1, n // 4)
    return WidthTrend(
        first_quartile_median=float(np.median(widths[:q])),
        last_quartile_median=float(np.median(widths[-q:])),
    )


@dataclass(frozen=True)
class SurfaceGrid:
    """Disc(z, t) and momentum branches on a rectangular grid.

    Arrays are indexed [t, z] (t-major).  Branch values are NaN wherever
    Disc < 0 (the geometrically inaccessible region).
    """

    t: np.ndarray
    z: np.ndarray
    disc: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray


def _column_coeffs(c: CoefficientSet) -> CoefficientSet:
    return replace(
        c,
        t=np.asarray(c.t)[:, None], a1=np.asarray(c.a1)[:, None],
        a2=np.asarray(c.a2)[:, None], a3=np.asarray(c.a3)[:, None],
        a4=np.asarray(c.a4)[:, None], a5=np.asarray(c.a5)[:, None],
        a6=np.asarray(c.a6)[:, None],
    )


def surface_grid(z_range: tuple[float, float], t_range: tuple[float, float],
                 nz: int, nt: int, model: InvariantModel,
                 workers: int = 1) -> SurfaceGrid:
    """Evaluate Disc and the p-branches on an inclusive (z, t) lattice."""
    if nz < 2 or nt < 2:
        raise ValueError("surface grid needs nz >= 2 and nt >= 2")
    z = np.linspace(z_range[0], z_range[1], nz)
    t = np.linspace(t_range[0], t_range[1], nt)

    def evaluate(t_chunk: np.ndarray):
        coeffs = _column_coeffs(model.coefficients_at(t_chunk))
        disc = disc_value(z[None, :], coeffs, model.K)
        with np.errstate(invalid="ignore"):
            root = np.sqrt(np.where(disc >= 0, disc, np.nan))
        lin = coeffs.a2 + coeffs.a4 * z[None, :]
        p_plus = (-lin + root) / (2.0 * coeffs.a5)
        p_minus = (-lin - root) / (2.0 * coeffs.a5)
        return disc, p_plus, p_minus

    if workers <= 1 or nt < 2 * workers:
        disc, p_plus, p_minus = evaluate(t)
    else:
        chunks = np.array_split(t, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(evaluate, chunks))
        disc = np.concatenate([p[0] for p in parts])
        p_plus = np.concatenate([p[1] for p in parts])
        p_minus = np.concatenate([p[2] for p in parts])
    return SurfaceGrid(t=t, z=z, disc=disc, p_plus=p_plus, p_minus=p_minus)
