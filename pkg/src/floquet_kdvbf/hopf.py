"""Numerical location of the Hopf point of the profile system.

The complex pair of characteristic roots at the origin is followed in the
speed ``c``; the Hopf point is where its real part changes sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoCrossing, PairLost
from .model import Params, char_roots

# roots with |Im| below this (relative to the root size) count as real
_REAL_TOL = 1e-12
_SLOPE_STEP = 1e-5


@dataclass
class RootTrace:
    """Complex pair followed along an ascending speed grid."""

    c_values: np.ndarray
    eta: np.ndarray
    zeta: np.ndarray


@dataclass(frozen=True)
class HopfResult:
    c_star: float
    omega_star: float
    slope: float

    def as_dict(self):
        return {"c_star": self.c_star, "omega_star": self.omega_star, "slope": self.slope}


def _is_real(z: complex) -> bool:
    return abs(z.imag) <= _REAL_TOL * max(1.0, abs(z))


def upper_root(c: float, params: Params) -> complex:
    """Member of the complex pair with positive imaginary part.

    Raises
    ------
    PairLost
        If the cubic has three real roots at ``c``.
    """
    cands = [z for z in char_roots(c, params) if not _is_real(z) and z.imag > 0]
    if not cands:
        raise PairLost(f"no complex pair of roots at c={c!r}")
    return cands[0]


def track_complex_pair(c_min: float, c_max: float, n_steps: int, params: Params) -> RootTrace:
    """Follow the complex pair over ``n_steps`` equispaced speeds.

    Each grid point picks the root nearest to the one recorded at the
    previous point, so the branch is continued rather than re-selected.
    """
    if not c_min < c_max:
        raise ValueError("c_min must be smaller than c_max")
    if n_steps < 2:
        raise ValueError("n_steps must be at least 2")
    cs = np.linspace(c_min, c_max, n_steps)
    prev = upper_root(cs[0], params)
    picked = [prev]
    for c in cs[1:]:
        roots = list(char_roots(c, params))
        z = min(roots, key=lambda w: abs(w - prev))
        if _is_real(z):
            raise PairLost(f"complex pair collapsed onto the real axis near c={c!r}")
        if z.imag < 0:
            z = z.conjugate()
        picked.append(z)
        prev = z
    lam = np.array(picked)
    return RootTrace(c_values=cs, eta=lam.real.copy(), zeta=lam.imag.copy())


def detect_hopf(params: Params, tol: float = 1e-13) -> HopfResult:
    """Bisect the real part of the complex pair on the bracket ``[-2r, 0]``.

    The crossing slope ``d Re(lambda)/dc`` is a central difference with
    step 1e-5 around the located speed.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = -2.0 * params.r, 0.0

    def eta(c):
        return upper_root(c, params).real

    f_lo, f_hi = eta(lo), eta(hi)
    if f_lo * f_hi > 0:
        raise NoCrossing(f"Re(lambda) keeps sign {np.sign(f_lo):+.0f} on [{lo}, {hi}]")
    if f_lo == 0.0:
        hi = lo
    elif f_hi == 0.0:
        lo = hi

    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = eta(mid)
        if abs(f_mid) <= tol or hi - lo <= 4 * np.finfo(float).eps * max(1.0, abs(mid)):
            break
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    c_star = mid
    omega = upper_root(c_star, params).imag
    slope = (eta(c_star + _SLOPE_STEP) - eta(c_star - _SLOPE_STEP)) / (2 * _SLOPE_STEP)
    return HopfResult(c_star=float(c_star), omega_star=float(omega), slope=float(slope))
