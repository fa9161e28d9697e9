"""Where do small periodic waves come from?

The rest state phi = 0 of the profile system has one real characteristic
root and a complex pair.  Sweeping the wave speed c moves the pair across
the imaginary axis at c0 = -r, which is where the wave family is born.
This script follows the pair, locates the crossing and measures how fast
the real part changes there.
"""

import math

from floquet_kdvbf import Params, detect_hopf, track_complex_pair

for r in (0.25, 1.0, 4.0):
    p = Params(r, alpha=1.0)
    res = detect_hopf(p)
    print(f"r={r:<5g} c*={res.c_star:+.12f}  omega*={res.omega_star:.12f}  "
          f"(sqrt r = {math.sqrt(r):.12f})  dRe/dc={res.slope:+.8f}")

# The pair leaves the right half plane as c increases past -r:
p = Params(1.0, 1.0)
trace = track_complex_pair(-1.5, -0.5, 11, p)
print("\n    c        Re(lambda)     Im(lambda)")
for c, eta, zeta in zip(trace.c_values, trace.eta, trace.zeta):
    print(f"{c:+.2f}   {eta:+.3e}   {zeta:.6f}")
