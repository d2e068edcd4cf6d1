"""Compare the numerical auxiliary solution with its two perturbative forms.

The exponential form y0*exp(eps*rho1 + eps^2*rho2) tracks the numerical
reference over the whole range and can never cross zero.  The plain Taylor
truncation starts just as well but drifts away sooner, and nothing protects
its sign.  Run:

    python demos/01_y_models.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tuberupture import Params, integrate_y, sample, y_exponential, y_taylor

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = Params()  # eps = 0.08, y0 = 1, z0 = 0.25
t_end = 30 * np.pi

print(f"integrating y''' + 4 y' = eps cos(t) y^(-5/2) up to t = 30 pi "
      f"at tolerance 1e-12 ...")
trajectory = integrate_y(params, t_end, 1e-12, 1e-12)

ts = np.arange(0.0, t_end, np.pi / 200)
y_num = sample(trajectory, ts)[:, 0]
y_exp = y_exponential(ts, params).y
y_tay = y_taylor(ts, params)

final_third = ts >= 2 * t_end / 3
print(f"max |y_exp2   - y_num| on the final third: "
      f"{np.max(np.abs(y_exp - y_num)[final_third]):.3e}")
print(f"max |y_taylor - y_num| on the final third: "
      f"{np.max(np.abs(y_tay - y_num)[final_third]):.3e}")
print(f"minimum of the exponential form: {y_exp.min():.6f} (always > 0)")

fig, (top, bottom) = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
top.plot(ts / np.pi, y_num, lw=1.0, label="numerical")
top.plot(ts / np.pi, y_exp, lw=0.8, ls="--", label="exponential 2nd order")
top.set_ylabel("y(t)")
top.legend(loc="upper right")
bottom.semilogy(ts / np.pi, np.abs(y_exp - y_num), lw=0.8,
                label="|exponential - numerical|")
bottom.semilogy(ts / np.pi, np.abs(y_tay - y_num), lw=0.8,
                label="|taylor - numerical|")
bottom.set_xlabel("t / pi")
bottom.set_ylabel("abs error")
bottom.legend(loc="lower right")
fig.tight_layout()
fig.savefig(OUT / "y_models.png", dpi=150)
print(f"wrote {OUT / 'y_models.png'}")
