"""Command-line entry point producing reproducible data artifacts.

Four subcommands cover the pipeline end to end:

* ``ycompare`` -- numerical y vs the exponential and Taylor approximations.
* ``scan``     -- bridge-window catalog, gap classification, optional SVG box plot.
* ``surface``  -- Disc(z, t) and momentum-branch grid as CSV.
* ``drift``    -- invariant drift I - K along the coupled numerical trajectory.

Runs are configured by flags only, and the full flag set is echoed into each
JSON summary, so every artifact documents how it was produced.  Identical
flags yield byte-identical files: CSV floats are written as the shortest
decimal that round-trips a 64-bit float, line endings are LF, and no
timestamps are embedded.  Time ranges are entered in absolute units, or in
units of pi with the --pi-units switch; t/pi columns are always emitted next
to raw t.
"""

from __future__ import annotations

import json
import math
import sys
from csv import writer as csv_writer
from pathlib import Path

import click
import numpy as np

from .invariant import InvariantModel
from .odekit import integrate_coupled, integrate_y, sample
from .perturbation import Params, PositivityError, y_exponential, y_taylor
from .scanner import (
    DEFAULT_STEP,
    GAP_CLASS_TOL,
    WindowCatalog,
    classify_gap,
    scan_windows,
    spacing_analysis,
    surface_grid,
)

__all__ = ["main", "boxplot_svg"]


def _fmt(x) -> str:
    """Shortest round-trip decimal for floats; empty cell for NaN/None."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return ""
    return repr(x)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        out = csv_writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([_fmt(v) for v in row])


def _write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _summary(flags: dict, t_start: float, t_end: float, step: float | None,
             model_name: str, windows=(), gaps=(), transition_t_over_pi=None,
             max_drift=None, **extra) -> dict:
    rng = {"t_start": t_start, "t_end": t_end, "step": step,
           "t_start_over_pi": t_start / math.pi, "t_end_over_pi": t_end / math.pi}
    out = {
        "params": flags,
        "range": rng,
        "model": model_name,
        "windows": list(windows),
        "gaps": list(gaps),
        "transition_t_over_pi": transition_t_over_pi,
        "max_drift": max_drift,
    }
    out.update(extra)
    return out


def _resolve_time(value: float | None, default: float, pi_units: bool) -> float:
    if value is None:
        return default
    return value * math.pi if pi_units else value


def _outdir(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _build_model(ymodel: str, params: Params, t_end: float,
                 rel_tol: float, abs_tol: float) -> InvariantModel:
    if ymodel == "exp2":
        return InvariantModel.exponential(params)
    if ymodel == "taylor2":
        return InvariantModel.taylor(params)
    if ymodel == "numeric":
        trajectory = integrate_y(params, t_end, rel_tol, abs_tol)
        return InvariantModel.numeric(params, trajectory)
    raise ValueError(f"unknown ymodel {ymodel!r}")


def boxplot_svg(catalog: WindowCatalog, width: int = 900, height: int = 180) -> str:
    """Minimal static box plot: one rect per bridge window, axis in t/pi.

    The vertical extent of each rect is the Boolean bridge indicator (0 to 1);
    only <rect> elements represent windows, so the rect count equals the
    window count.
    """
    left, right, top, bottom = 60.0, 20.0, 20.0, 45.0
    x0, x1 = catalog.t_start / math.pi, catalog.t_end / math.pi
    span = x1 - x0
    plot_w = width - left - right
    baseline = height - bottom

    def sx(t_over_pi: float) -> float:
        return left + (t_over_pi - x0) / span * plot_w

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<line x1="{left:.2f}" y1="{baseline:.2f}" x2="{width - right:.2f}" '
        f'y2="{baseline:.2f}" stroke="black" stroke-width="1"/>',
    ]
    tick_step = 1.0
    for candidate in (1, 2, 5, 10, 20, 50, 100, 200):
        if span / candidate <= 10:
            tick_step = float(candidate)
            break
    tick = math.ceil(x0 / tick_step) * tick_step
    while tick <= x1 + 1e-9:
        x = sx(tick)
        parts.append(f'<line x1="{x:.2f}" y1="{baseline:.2f}" x2="{x:.2f}" '
                     f'y2="{baseline + 6:.2f}" stroke="black" stroke-width="1"/>')
        label = f"{tick:g}"
        parts.append(f'<text x="{x:.2f}" y="{baseline + 20:.2f}" font-size="11" '
                     f'text-anchor="middle">{label}</text>')
        tick += tick_step
    parts.append(f'<text x="{(left + width - right) / 2:.2f}" y="{height - 8:.2f}" '
                 f'font-size="12" text-anchor="middle">t/&#960;</text>')
    parts.append(f'<text x="14" y="{(top + baseline) / 2:.2f}" font-size="12" '
                 f'text-anchor="middle" transform="rotate(-90 14 '
                 f'{(top + baseline) / 2:.2f})">bridge indicator</text>')
    for w in catalog.windows:
        x_open = sx(w.t_open / math.pi)
        x_close = sx(w.t_close / math.pi)
        parts.append(f'<rect x="{x_open:.4f}" y="{top:.2f}" '
                     f'width="{x_close - x_open:.4f}" height="{baseline - top:.2f}" '
                     f'fill="#4477aa"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _window_record(index: int, w) -> dict:
    return {
        "index": index,
        "t_open": w.t_open,
        "t_close": w.t_close,
        "width": w.width,
        "midpoint": w.midpoint,
        "t_open_over_pi": w.t_open / math.pi,
        "t_close_over_pi": w.t_close / math.pi,
        "width_over_pi": w.width / math.pi,
        "midpoint_over_pi": w.midpoint / math.pi,
    }


_COMMON = [
    click.option("--epsilon", type=float, default=0.08, show_default=True,
                 help="Driver strength."),
    click.option("--y0", type=float, default=1.0, show_default=True,
                 help="Initial auxiliary amplitude (positive)."),
    click.option("--z0", type=float, default=0.25, show_default=True,
                 help="Initial configuration amplitude."),
    click.option("--t-start", type=float, default=None,
                 help="Range start (absolute, or units of pi with --pi-units)."),
    click.option("--t-end", type=float, default=None,
                 help="Range end (absolute, or units of pi with --pi-units)."),
    click.option("--pi-units", is_flag=True, default=False,
                 help="Interpret --t-start/--t-end/--step in units of pi."),
    click.option("--out", type=str, default=".", show_default=True,
                 help="Output directory for the artifacts."),
]


def _common_options(fn):
    for option in reversed(_COMMON):
        fn = option(fn)
    return fn


def _flags(**kwargs) -> dict:
    return {k: (v if not isinstance(v, Path) else str(v)) for k, v in kwargs.items()}


@click.group()
def main() -> None:
    """Rupture diagnostics for the invariant tube of a driven oscillator."""


@main.command()
@_common_options
@click.option("--step", type=float, default=None,
              help="Output grid step [default: pi/200].")
@click.option("--rel-tol", type=float, default=1e-10, show_default=True)
@click.option("--abs-tol", type=float, default=1e-10, show_default=True)
def ycompare(epsilon, y0, z0, t_start, t_end, pi_units, out, step, rel_tol, abs_tol):
    """Compare numerical y with the exponential and Taylor forms.

    Writes ycompare.csv (t, y_numeric, y_exp2, y_taylor2, err_exp, err_taylor)
    and ycompare_summary.json with the max absolute error of each model.
    """
    try:
        params = Params(epsilon=epsilon, y0=y0, z0=z0)
        t0 = _resolve_time(t_start, 0.0, pi_units)
        t1 = _resolve_time(t_end, 30.0 * math.pi, pi_units)
        h = _resolve_time(step, DEFAULT_STEP, pi_units)
        if not t0 < t1:
            raise ValueError(f"need t_start < t_end, got [{t0}, {t1}]")
        if h <= 0:
            raise ValueError(f"step must be positive, got {h}")
        trajectory = integrate_y(params, t1, rel_tol, abs_tol)
        ts = np.arange(t0, t1, h)
        y_num = sample(trajectory, ts)[:, 0]
        y_exp = np.atleast_1d(y_exponential(ts, params).y)
        y_tay = np.atleast_1d(y_taylor(ts, params))
        err_exp = y_exp - y_num
        err_tay = y_tay - y_num
    except (ValueError, PositivityError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    outdir = _outdir(out)
    rows = zip(ts, y_num, y_exp, y_tay, err_exp, err_tay)
    _write_csv(outdir / "ycompare.csv",
               ["t", "y_numeric", "y_exp2", "y_taylor2", "err_exp", "err_taylor"],
               rows)
    flags = _flags(command="ycompare", epsilon=epsilon, y0=y0, z0=z0,
                   t_start=t0, t_end=t1, step=h, pi_units=pi_units,
                   rel_tol=rel_tol, abs_tol=abs_tol, out=out)
    _write_json(outdir / "ycompare_summary.json", _summary(
        flags, t0, t1, h, "numeric-vs-exp2-vs-taylor2",
        max_err_exp2=float(np.max(np.abs(err_exp))),
        max_err_taylor2=float(np.max(np.abs(err_tay))),
    ))
    click.echo(f"wrote {outdir / 'ycompare.csv'} and {outdir / 'ycompare_summary.json'}")


@main.command()
@_common_options
@click.option("--step", type=float, default=None,
              help="Scan grid step [default: pi/200].")
@click.option("--ymodel", type=click.Choice(["exp2", "taylor2", "numeric"]),
              default="exp2", show_default=True)
@click.option("--rel-tol", type=float, default=1e-10, show_default=True,
              help="Integrator tolerance (numeric ymodel only).")
@click.option("--abs-tol", type=float, default=1e-10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "svg"]),
              default="csv", show_default=True,
              help="svg additionally writes the box plot.")
@click.option("--workers", type=int, default=1, show_default=True,
              help="Threads for the grid evaluation (result is identical).")
def scan(epsilon, y0, z0, t_start, t_end, pi_units, out, step, ymodel,
         rel_tol, abs_tol, fmt, workers):
    """Catalog bridge windows over a time range.

    Writes scan_windows.csv, scan_gaps.csv and scan_summary.json; with
    --format svg also scan_boxplot.svg (one rect per window, axis in t/pi).
    """
    try:
        params = Params(epsilon=epsilon, y0=y0, z0=z0)
        t0 = _resolve_time(t_start, 0.0, pi_units)
        t1 = _resolve_time(t_end, 10.0 * math.pi, pi_units)
        h = _resolve_time(step, DEFAULT_STEP, pi_units)
        model = _build_model(ymodel, params, t1, rel_tol, abs_tol)
        catalog = scan_windows(t0, t1, h, model, workers=workers)
    except (ValueError, PositivityError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    outdir = _outdir(out)
    window_rows = [
        (i, w.t_open, w.t_close, w.width, w.midpoint,
         w.t_open / math.pi, w.t_close / math.pi, w.width / math.pi,
         w.midpoint / math.pi)
        for i, w in enumerate(catalog.windows)
    ]
    _write_csv(outdir / "scan_windows.csv",
               ["index", "t_open", "t_close", "width", "midpoint",
                "t_open_over_pi", "t_close_over_pi", "width_over_pi",
                "midpoint_over_pi"],
               window_rows)

    gaps = catalog.gaps
    gap_rows = [(i, g, g / math.pi, classify_gap(g, GAP_CLASS_TOL))
                for i, g in enumerate(gaps)]
    _write_csv(outdir / "scan_gaps.csv",
               ["index", "gap", "gap_over_pi", "class"], gap_rows)

    transition = None
    alternation = None
    if len(catalog) >= 4:
        report = spacing_analysis(catalog)
        if report.transition_time is not None:
            transition = report.transition_time / math.pi
        alternation = report.alternation_fraction

    flags = _flags(command="scan", epsilon=epsilon, y0=y0, z0=z0, t_start=t0,
                   t_end=t1, step=h, pi_units=pi_units, ymodel=ymodel,
                   rel_tol=rel_tol, abs_tol=abs_tol, format=fmt,
                   workers=workers, out=out)
    _write_json(outdir / "scan_summary.json", _summary(
        flags, t0, t1, h, ymodel,
        windows=[_window_record(i, w) for i, w in enumerate(catalog.windows)],
        gaps=[{"index": i, "gap": float(g), "gap_over_pi": float(g / math.pi),
               "class": classify_gap(g, GAP_CLASS_TOL)}
              for i, g in enumerate(gaps)],
        transition_t_over_pi=transition,
        window_count=len(catalog),
        width_alternation_fraction=alternation,
    ))
    written = ["scan_windows.csv", "scan_gaps.csv", "scan_summary.json"]
    if fmt == "svg":
        (outdir / "scan_boxplot.svg").write_text(boxplot_svg(catalog))
        written.append("scan_boxplot.svg")
    click.echo(f"wrote {', '.join(str(outdir / name) for name in written)}")


@main.command()
@_common_options
@click.option("--z-min", type=float, default=-1.0, show_default=True)
@click.option("--z-max", type=float, default=1.0, show_default=True)
@click.option("--nz", type=int, default=101, show_default=True)
@click.option("--nt", type=int, default=501, show_default=True)
@click.option("--ymodel", type=click.Choice(["exp2", "taylor2", "numeric"]),
              default="exp2", show_default=True)
@click.option("--rel-tol", type=float, default=1e-10, show_default=True)
@click.option("--abs-tol", type=float, default=1e-10, show_default=True)
def surface(epsilon, y0, z0, t_start, t_end, pi_units, out, z_min, z_max,
            nz, nt, ymodel, rel_tol, abs_tol):
    """Rasterize Disc(z, t) and the momentum branches to surface.csv.

    Rows are t-major; p_plus/p_minus cells are empty where Disc < 0.
    """
    try:
        params = Params(epsilon=epsilon, y0=y0, z0=z0)
        t0 = _resolve_time(t_start, 0.0, pi_units)
        t1 = _resolve_time(t_end, 10.0 * math.pi, pi_units)
        if not t0 < t1:
            raise ValueError(f"need t_start < t_end, got [{t0}, {t1}]")
        if not z_min < z_max:
            raise ValueError(f"need z_min < z_max, got [{z_min}, {z_max}]")
        model = _build_model(ymodel, params, t1, rel_tol, abs_tol)
        grid = surface_grid((z_min, z_max), (t0, t1), nz, nt, model)
    except (ValueError, PositivityError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    outdir = _outdir(out)

    def rows():
        for i, t in enumerate(grid.t):
            for j, z in enumerate(grid.z):
                disc = grid.disc[i, j]
                yield (t, z, disc,
                       grid.p_plus[i, j] if disc >= 0 else None,
                       grid.p_minus[i, j] if disc >= 0 else None)

    _write_csv(outdir / "surface.csv",
               ["t", "z", "disc", "p_plus", "p_minus"], rows())
    flags = _flags(command="surface", epsilon=epsilon, y0=y0, z0=z0,
                   t_start=t0, t_end=t1, pi_units=pi_units, z_min=z_min,
                   z_max=z_max, nz=nz, nt=nt, ymodel=ymodel, rel_tol=rel_tol,
                   abs_tol=abs_tol, out=out)
    _write_json(outdir / "surface_summary.json", _summary(
        flags, t0, t1, None, ymodel,
        grid_shape=[int(nt), int(nz)],
        disc_min=float(np.min(grid.disc)),
        disc_max=float(np.max(grid.disc)),
    ))
    click.echo(f"wrote {outdir / 'surface.csv'} and {outdir / 'surface_summary.json'}")


@main.command()
@_common_options
@click.option("--step", type=float, default=None,
              help="Sampling step for the drift series [default: pi/50].")
@click.option("--rel-tol", type=float, default=1e-10, show_default=True)
@click.option("--abs-tol", type=float, default=1e-10, show_default=True)
def drift(epsilon, y0, z0, t_start, t_end, pi_units, out, step, rel_tol, abs_tol):
    """Invariant drift along the coupled numerical trajectory.

    Writes drift.csv with I - K evaluated with coefficients from the
    numerical y (structurally conserved) and from the exponential model
    (small slow drift from series truncation), plus drift_summary.json.
    """
    try:
        params = Params(epsilon=epsilon, y0=y0, z0=z0)
        t0 = _resolve_time(t_start, 0.0, pi_units)
        t1 = _resolve_time(t_end, 20.0 * math.pi, pi_units)
        h = _resolve_time(step, np.pi / 50.0, pi_units)
        if not 0.0 <= t0 < t1:
            raise ValueError(f"need 0 <= t_start < t_end, got [{t0}, {t1}]")
        if h <= 0:
            raise ValueError(f"step must be positive, got {h}")
        trajectory = integrate_coupled(params, t1, rel_tol, abs_tol)
        ts = np.arange(t0, t1, h)
        states = sample(trajectory, ts)
        z, p = states[:, 3], states[:, 4]

        numeric_model = InvariantModel.numeric(params, trajectory)
        exp_model = InvariantModel.exponential(params)
        drift_numeric = numeric_model.invariant_at(z, p, ts)
        drift_exp = exp_model.invariant_at(z, p, ts)
        K = numeric_model.K
    except (ValueError, PositivityError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    outdir = _outdir(out)
    _write_csv(outdir / "drift.csv",
               ["t", "drift_numeric", "drift_exp2"],
               zip(ts, drift_numeric, drift_exp))
    flags = _flags(command="drift", epsilon=epsilon, y0=y0, z0=z0, t_start=t0,
                   t_end=t1, step=h, pi_units=pi_units, rel_tol=rel_tol,
                   abs_tol=abs_tol, out=out)
    _write_json(outdir / "drift_summary.json", _summary(
        flags, t0, t1, h, "numeric",
        max_drift=float(np.max(np.abs(drift_numeric)) / abs(K)),
        max_drift_exp2=float(np.max(np.abs(drift_exp)) / abs(K)),
        reference_constant=K,
    ))
    click.echo(f"wrote {outdir / 'drift.csv'} and {outdir / 'drift_summary.json'}")


if __name__ == "__main__":
    main()
