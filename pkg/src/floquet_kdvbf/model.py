"""Profile ODE of the KdV-Burgers-Fisher traveling wave problem.

A traveling wave ``u(x, t) = phi(x - c t)`` of

    u_t + alpha u u_x + u_xxx = u_xx + r u (1 - u)

solves the third-order profile equation, written here as the first-order
system ``Phi' = F(Phi)`` with ``Phi = (phi, phi', phi'')``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class Params:
    """Physical constants and the quantities derived from them.

    Parameters
    ----------
    r : float
        Reaction rate of the logistic source, ``r > 0``.
    alpha : float
        Convection strength, ``alpha > 0``.

    Attributes
    ----------
    c0 : float
        Critical speed ``-r`` at which the origin undergoes a Hopf bifurcation.
    omega0 : float
        Frequency ``sqrt(r)`` of the purely imaginary pair at ``c0``.
    L0 : float
        Limiting period ``2 pi / sqrt(r)``.
    """

    r: float
    alpha: float
    c0: float = field(init=False)
    omega0: float = field(init=False)
    L0: float = field(init=False)

    def __post_init__(self):
        r = float(self.r)
        alpha = float(self.alpha)
        if not (math.isfinite(r) and r > 0):
            raise ValueError("r must be positive")
        if not (math.isfinite(alpha) and alpha > 0):
            raise ValueError("alpha must be positive")
        omega0 = math.sqrt(r)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "c0", -r)
        object.__setattr__(self, "omega0", omega0)
        object.__setattr__(self, "L0", 2.0 * math.pi / omega0)


class StateVec(NamedTuple):
    """Point ``(phi, phi', phi'')`` of the three-dimensional phase space."""

    phi1: float
    phi2: float
    phi3: float


@dataclass(frozen=True)
class CubicRootSet:
    """The three roots of the characteristic cubic at one speed.

    Roots are sorted lexicographically by (real part, imaginary part),
    largest first.
    """

    roots: tuple[complex, complex, complex]

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, k):
        return self.roots[k]

    def __len__(self):
        return 3


def char_poly_eval(lam: complex, c: float, params: Params) -> complex:
    """Evaluate ``p(lam, c) = lam^2 (lam - 1) - lam c - r``."""
    return lam * lam * (lam - 1.0) - lam * c - params.r


def companion(c: float, params: Params) -> np.ndarray:
    """Linearization of the vector field at the origin (the companion matrix)."""
    return np.array(
        [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [params.r, c, 1.0]], dtype=float
    )


def _sort_roots(roots) -> tuple[complex, complex, complex]:
    return tuple(sorted((complex(z) for z in roots), key=lambda z: (z.real, z.imag), reverse=True))


def char_roots(c: float, params: Params) -> CubicRootSet:
    """Roots of the characteristic cubic from the companion-matrix eigenvalues.

    Real roots come back with an exactly zero imaginary part, and the
    complex pair is made exactly conjugate.
    """
    ev = np.linalg.eigvals(companion(c, params))
    # the companion matrix is real: LAPACK returns either 3 real eigenvalues
    # or one real eigenvalue plus an exact conjugate pair
    cleaned = [complex(z.real, 0.0) if z.imag == 0.0 else complex(z) for z in ev]
    return CubicRootSet(_sort_roots(cleaned))


def vector_field(state, c: float, params: Params) -> StateVec:
    """Right-hand side ``F(Phi)`` of the first-order profile system."""
    p1, p2, p3 = state
    r, alpha = params.r, params.alpha
    return StateVec(p2, p3, p3 + r * p1 * (1.0 - p1) - alpha * p1 * p2 + c * p2)


def jacobian(state, c: float, params: Params) -> np.ndarray:
    """Jacobian ``D F(Phi)`` as a 3x3 array."""
    p1, p2, _ = state
    r, alpha = params.r, params.alpha
    return np.array(
        [
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [r * (1.0 - 2.0 * p1) - alpha * p2, c - alpha * p1, 1.0],
        ],
        dtype=float,
    )


def equilibria() -> tuple[StateVec, StateVec]:
    """The two rest points: the origin and ``(1, 0, 0)``."""
    return StateVec(0.0, 0.0, 0.0), StateVec(1.0, 0.0, 0.0)
