"""Hill's-method matrices of the Bloch operators around a periodic wave.

Linearizing the PDE about the wave ``phi`` (in the frame moving with it)
gives

    L v = -v''' + v'' + a1(x) v' + a0(x) v,
    a1 = c - alpha phi,   a0 = r (1 - 2 phi) - alpha phi'.

With ``y = pi x / L`` and ``w(y) = exp(-i theta y / pi) v(L y / pi)`` the
quasi-periodic eigenproblem becomes a periodic one on ``[0, pi]`` for

    L_theta = -(i theta + pi d_y)^3 + L (i theta + pi d_y)^2
              + L^2 a1(y) (i theta + pi d_y) + L^3 a0(y),

with eigenvalue ``L^3 lambda``.  In the basis ``exp(2 i n y)`` the operator
``i theta + pi d_y`` acts diagonally as ``i mu_n``, ``mu_n = theta + 2 pi n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fourier
from .errors import ThetaOutOfRange
from .orbit import WaveProfile

DEFAULT_N = 24


@dataclass(frozen=True)
class CoeffSeries:
    """Fourier coefficients (modes ``-2M..2M``) of the rescaled coefficients.

    Rescaling the period ``L`` onto ``[0, pi]`` maps ``exp(i k 2 pi x / L)``
    to ``exp(2 i k y)``, so the coefficient list is the same in either
    variable.
    """

    a1_hat: np.ndarray
    a0_hat: np.ndarray
    profile_eps: float
    period: float


@dataclass(frozen=True)
class BlochMatrix:
    theta: float
    N: int
    entries: np.ndarray
    scale: float
    eps: float


@dataclass(frozen=True)
class PerturbationSplit:
    """Bloch operator written as ``L^0_theta + sqrt(eps) L^1_theta``.

    ``L^0_theta`` is the constant-coefficient operator at the limiting
    period ``L0`` and speed ``c0``.  ``L^1_theta`` has the constant
    coefficient ``b2`` on the second-order term and the periodic
    coefficients ``b1`` (first order) and ``b0`` (zeroth order).
    """

    b2: float
    b1_hat: np.ndarray
    b0_hat: np.ndarray
    sqrt_eps: float
    L0: float
    c0: float
    r: float

    def b1_sup_bound(self) -> float:
        return float(np.sum(np.abs(self.b1_hat)))

    def b0_sup_bound(self) -> float:
        return float(np.sum(np.abs(self.b0_hat)))


def linearized_coeffs(profile: WaveProfile) -> CoeffSeries:
    """Coefficient series of ``a1 = c - alpha phi`` and ``a0 = r(1 - 2 phi) - alpha phi'``.

    Both are affine in the profile, so their coefficients follow exactly
    from those of ``phi`` and ``phi'``.
    """
    p = profile.params
    M = profile.M
    phi = fourier.resize(profile.coeffs[0], 2 * M)
    dphi = fourier.resize(profile.coeffs[1], 2 * M)
    a1 = -p.alpha * phi
    a0 = -2.0 * p.r * phi - p.alpha * dphi
    a1[2 * M] += profile.c
    a0[2 * M] += p.r
    return CoeffSeries(a1_hat=a1, a0_hat=a0, profile_eps=profile.eps, period=profile.period)


def check_theta(theta: float) -> float:
    theta = float(theta)
    if not (-math.pi < theta <= math.pi):
        raise ThetaOutOfRange(f"theta={theta!r} outside (-pi, pi]")
    return theta


def wavenumbers(theta: float, N: int) -> np.ndarray:
    """``mu_n = theta + 2 pi n`` for ``n = -N..N``."""
    return theta + 2.0 * math.pi * fourier.modes(N)


def multiplication_matrix(coeffs: np.ndarray, N: int) -> np.ndarray:
    """Toeplitz matrix ``T[m, n] = coeffs[m - n]`` on modes ``-N..N``.

    Coefficients beyond the stored range count as zero.
    """
    K = (len(coeffs) - 1) // 2
    n = fourier.modes(N)
    diff = n[:, None] - n[None, :]
    inside = np.abs(diff) <= K
    return np.where(inside, coeffs[np.clip(diff + K, 0, 2 * K)], 0.0)


def constant_symbol(mu, period: float, c: float, r: float):
    """Diagonal entries of the Bloch matrix for constant coefficients ``a1 = c``, ``a0 = r``."""
    imu = 1j * np.asarray(mu)
    return -imu**3 + period * imu**2 + period**2 * c * imu + period**3 * r


def assemble_bloch(theta: float, coeffs: CoeffSeries, period: float, N: int = DEFAULT_N) -> BlochMatrix:
    """Truncated matrix of ``L_theta`` on the modes ``exp(2 i n y)``, ``|n| <= N``."""
    theta = check_theta(theta)
    if N < 4:
        raise ValueError("N must be at least 4")
    mu = wavenumbers(theta, N)
    imu = 1j * mu
    L = period
    A = L**2 * multiplication_matrix(coeffs.a1_hat, N) * imu[None, :]
    A += L**3 * multiplication_matrix(coeffs.a0_hat, N)
    A[np.diag_indices_from(A)] += -imu**3 + L * imu**2
    return BlochMatrix(theta=theta, N=N, entries=A, scale=L**3, eps=coeffs.profile_eps)


def perturbation_split(profile: WaveProfile) -> PerturbationSplit:
    """Split the Bloch operators about the constant-coefficient limit.

    ``b2 = (L - L0)/sqrt(eps)``; ``b1`` and ``b0`` are the coefficient
    series of ``(L^2 a1 - L0^2 c0)/sqrt(eps)`` and ``(L^3 a0 - L0^3 r)/sqrt(eps)``.
    """
    if profile.eps <= 0:
        raise ValueError("perturbation split needs eps > 0")
    p = profile.params
    s = math.sqrt(profile.eps)
    L, L0 = profile.period, p.L0
    cs = linearized_coeffs(profile)
    K = (len(cs.a1_hat) - 1) // 2
    b1 = L**2 * cs.a1_hat
    b0 = L**3 * cs.a0_hat
    b1[K] -= L0**2 * p.c0
    b0[K] -= L0**3 * p.r
    return PerturbationSplit(b2=(L - L0) / s, b1_hat=b1 / s, b0_hat=b0 / s, sqrt_eps=s,
                             L0=L0, c0=p.c0, r=p.r)


def assemble_split(theta: float, split: PerturbationSplit, N: int = DEFAULT_N):
    """Matrices of ``L^0_theta`` and ``L^1_theta`` on modes ``|n| <= N``."""
    theta = check_theta(theta)
    mu = wavenumbers(theta, N)
    imu = 1j * mu
    A0 = np.diag(constant_symbol(mu, split.L0, split.c0, split.r))
    A1 = multiplication_matrix(split.b1_hat, N) * imu[None, :] + multiplication_matrix(split.b0_hat, N)
    A1[np.diag_indices_from(A1)] += split.b2 * imu**2
    return A0, A1


def quasi_periodic_reconstruct(eigvec, theta: float, period: float, n_samples: int = 257,
                               order: int = 0):
    """Undo the Bloch transform: sample ``d^order v / dx^order`` on ``[0, L]``.

    ``v(x) = exp(i theta x / L) w(pi x / L)`` with ``w`` given by its
    coefficients on ``exp(2 i n y)``.  The grid includes both endpoints so
    the quasi-periodic condition ``v(L) = exp(i theta) v(0)`` can be read off.
    """
    w = np.asarray(eigvec, dtype=complex)
    N = (len(w) - 1) // 2
    k = wavenumbers(float(theta), N) / period
    x = np.linspace(0.0, period, n_samples)
    v = np.exp(1j * np.multiply.outer(x, k)) @ (w * (1j * k) ** order)
    return x, v


def derivative_norms(u_hat, n_quad: int | None = None) -> np.ndarray:
    """L2 norms on ``[0, pi]`` of ``u, u_y, u_yy, u_yyy`` by the trapezoid rule.

    ``u_hat`` are centered coefficients on ``exp(2 i k y)``; the rule is
    exact for these trigonometric polynomials once ``n_quad`` exceeds twice
    the degree.
    """
    u_hat = np.asarray(u_hat, dtype=complex)
    K = (len(u_hat) - 1) // 2
    n = n_quad or 4 * K + 4
    k = 2.0 * fourier.modes(K)
    out = np.empty(4)
    for j in range(4):
        vals = fourier.synthesize(u_hat * (1j * k) ** j, n)
        out[j] = math.sqrt(math.pi * np.mean(np.abs(vals) ** 2))
    return out


def interpolation_margins(u_hat, delta: float) -> tuple[float, float]:
    """Slack in the two interpolation bounds for ``H^3`` periodic functions.

    Returns ``rhs - lhs`` for

        |u_yy| <= (2/3) delta^(3/2) |u_yyy| + (1/3) delta^(-3) |u|
        |u_y|  <= (1/3) delta^3 |u_yyy| + (2/3) delta^(-3/2) |u|

    Both margins are non-negative whenever the bounds hold.
    """
    n0, n1, n2, n3 = derivative_norms(u_hat)
    m2 = (2 / 3) * delta**1.5 * n3 + (1 / 3) * delta**-3 * n0 - n2
    m1 = (1 / 3) * delta**3 * n3 + (2 / 3) * delta**-1.5 * n0 - n1
    return float(m2), float(m1)


def random_real_trig_poly(rng: np.random.Generator, degree: int = 16) -> np.ndarray:
    """Centered coefficients of a random real trigonometric polynomial on ``[0, pi]``."""
    half = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    half *= rng.uniform(0, 1, size=degree + 1) ** 2
    half[0] = half[0].real
    return np.concatenate([np.conj(half[:0:-1]), half])
