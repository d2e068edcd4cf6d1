"""Scan for bridge windows and expose the period-halving of their spacing.

One scalar decides everything: the cubic discriminant of Disc(z, t).  Where
it dips below zero the tube is open.  Windows first appear near t ~ 330 pi,
arrive every 2 pi, and beyond t/pi ~ 366 a second family appears in between,
halving the spacing to pi.  Run:

    python demos/03_bridge_windows.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tuberupture import InvariantModel, Params, scan_windows, spacing_analysis, width_trend
from tuberupture.cli import boxplot_svg

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

model = InvariantModel.exponential(Params())
t0, t1, step = 320 * np.pi, 400 * np.pi, np.pi / 200

print(f"scanning bridge criterion over [{t0 / np.pi:.0f} pi, {t1 / np.pi:.0f} pi] "
      f"at step pi/200 ...")
catalog = scan_windows(t0, t1, step, model, workers=4)
print(f"found {len(catalog)} windows; first five:")
for w in catalog.windows[:5]:
    print(f"  [{w.t_open / np.pi:10.4f}, {w.t_close / np.pi:10.4f}] pi   "
          f"width {w.width / np.pi:.4f} pi")

analysis = spacing_analysis(catalog)
print(f"gap classes: {analysis.n_two_pi} x ~2pi, {analysis.n_pi} x ~pi, "
      f"{analysis.n_other} other")
print(f"period-halving transition at t/pi = {analysis.transition_time / np.pi:.2f}")
print(f"width alternation fraction after the transition: "
      f"{analysis.alternation_fraction:.2f}")
trend = width_trend(catalog)
print(f"median width, first quartile {trend.first_quartile_median / np.pi:.4f} pi "
      f"-> last quartile {trend.last_quartile_median / np.pi:.4f} pi "
      f"(ratio {trend.ratio:.2f})")

(OUT / "bridge_boxplot.svg").write_text(boxplot_svg(catalog))
print(f"wrote {OUT / 'bridge_boxplot.svg'}")

fig, (top, bottom) = plt.subplots(2, 1, figsize=(10, 5), sharex=True)
for w in catalog.windows:
    top.axvspan(w.t_open / np.pi, w.t_close / np.pi, color="C0")
top.set_ylabel("bridge indicator")
top.set_yticks([0, 1])
top.set_ylim(0, 1)
mids = catalog.midpoints[1:] / np.pi
bottom.plot(mids, catalog.gaps / np.pi, "o", ms=3)
bottom.axhline(2.0, color="gray", lw=0.6)
bottom.axhline(1.0, color="gray", lw=0.6)
bottom.set_xlabel("t / pi")
bottom.set_ylabel("gap / pi")
fig.tight_layout()
fig.savefig(OUT / "bridge_windows.png", dpi=150)
print(f"wrote {OUT / 'bridge_windows.png'}")
