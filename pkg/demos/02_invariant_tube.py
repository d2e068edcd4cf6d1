"""Visualize the invariant tube and its late-time deformation.

The level set I(z, p, t) = K is accessible only where Disc(z, t) >= 0.  At
early times that region is one closed band drifting around z0 (a closed
tube).  At late times a second tongue reaches in from negative z and, for
short intervals, joins the central band: the geometric signature of a
bridge.  Run:

    python demos/02_invariant_tube.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tuberupture import InvariantModel, Params, surface_grid

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

model = InvariantModel.exponential(Params())
print(f"invariant level K = {model.K:.10f}")

windows = [("early, closed tube", 0.0, 10 * np.pi),
           ("late, tongues joining", 330 * np.pi, 340 * np.pi)]

fig, axes = plt.subplots(1, 2, figsize=(11, 4))
for ax, (label, t0, t1) in zip(axes, windows):
    grid = surface_grid((-2.0, 1.0), (t0, t1), 301, 401, model)
    accessible = np.where(grid.disc >= 0, 1.0, 0.0)
    ax.pcolormesh(grid.t / np.pi, grid.z, accessible.T, cmap="Blues",
                  shading="auto")
    ax.set_title(f"{label}:  Disc(z, t) >= 0")
    ax.set_xlabel("t / pi")
    ax.set_ylabel("z")
fig.tight_layout()
fig.savefig(OUT / "tube_accessibility.png", dpi=150)
print(f"wrote {OUT / 'tube_accessibility.png'}")

# momentum branches at one fixed early time: the closed cross-section
t_fixed = 2 * np.pi
zs = np.linspace(-0.6, 0.6, 2001)
coeffs = model.coefficients_at(t_fixed)
branches = [model.p_branches_at(float(z), t_fixed) for z in zs]
fig, ax = plt.subplots(figsize=(5, 4))
upper = [b[-1] if b else np.nan for b in branches]
lower = [b[0] if b else np.nan for b in branches]
ax.plot(zs, upper, "C0", lw=1.0)
ax.plot(zs, lower, "C0", lw=1.0)
ax.set_xlabel("z")
ax.set_ylabel("p")
ax.set_title(f"tube cross-section at t = 2 pi")
fig.tight_layout()
fig.savefig(OUT / "tube_cross_section.png", dpi=150)
print(f"wrote {OUT / 'tube_cross_section.png'}")
