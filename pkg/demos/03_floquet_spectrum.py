"""Floquet spectrum of a small wave and the instability verdict.

At eps = 0 the Bloch operators have constant coefficients and theta = 0
carries the eigenvalue r L0^3 (that is, lambda = r).  For eps > 0 the
perturbed eigenvalue stays near r L0^3, so every small wave is spectrally
unstable.  The table shows the perturbed eigenvalue approaching its limit.
Pass --plot to draw the spectrum near the origin (needs matplotlib).
"""

import sys

import numpy as np

from floquet_kdvbf import Params, continue_family, convergence_study, floquet_sweep, verdict

params = Params(1.0, 1.0)
family = continue_family([0.001, 0.002, 0.004, 0.008, 0.016], params)

for prof in family:
    print(verdict(floquet_sweep(prof, n_theta=32)).summary())

table = convergence_study(family)
print(f"\nr L0^3 = {table.reference:.6f}")
for eps, lam, dist in zip(table.eps, table.eigenvalue, table.distance):
    print(f"eps={eps:.3f}  eigenvalue {lam.real:.6f}{lam.imag:+.1e}i  distance {dist:.4e}  "
          f"distance/eps {dist / eps:.3f}")
print(f"distance ~ sqrt(eps)^{table.exponent():.2f}")

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    spec = floquet_sweep(family[-1], n_theta=128)
    pts = np.concatenate([s.unscaled[s.kept_mask] for s in spec.slices])
    pts = pts[np.abs(pts) < 5]
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.plot(pts.real, pts.imag, ".", ms=2)
    ax.axvline(0, color="k", lw=0.5)
    ax.set_xlabel("Re lambda")
    ax.set_ylabel("Im lambda")
    ax.set_title(f"Floquet spectrum, eps={family[-1].eps:g}")
    fig.tight_layout()
    fig.savefig("floquet_spectrum.png", dpi=120)
    print("wrote floquet_spectrum.png")
