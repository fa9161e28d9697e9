"""Periodic orbits of the profile system by harmonic balance.

The profile ``phi`` is a truncated Fourier series in ``exp(i k omega xi)``
with ``omega = 2 pi / L``.  Newton's method is applied to the Galerkin
projection of the profile equation

    phi''' - phi'' - c phi' + alpha phi phi' - r phi + r phi^2 = 0

on modes ``0..M`` with the period ``L`` as an extra unknown and
``Im(phi_hat[1]) = 0`` pinning the translation.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import scipy.linalg as sla
from scipy.optimize import minimize_scalar

from . import fourier
from .errors import CollapsedToZero, NoConvergence
from .model import Params, StateVec, vector_field

log = logging.getLogger(__name__)

DEFAULT_M = 32
EPS_MAX = 0.1
MAX_ITER = 50
MAX_HALVINGS = 8


@dataclass(frozen=True)
class WaveProfile:
    """A periodic orbit ``Phi(xi) = (phi, phi', phi'')`` of period ``period``.

    ``coeffs`` has shape ``(3, 2M + 1)``: row ``j`` holds the centered Fourier
    coefficients of component ``j`` over one period.
    """

    eps: float
    c: float
    period: float
    coeffs: np.ndarray
    residual: float
    params: Params

    @property
    def M(self) -> int:
        return (self.coeffs.shape[1] - 1) // 2

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.period

    @property
    def mean(self) -> float:
        return float(self.coeffs[0, self.M].real)

    def amplitude(self) -> float:
        """``max |phi|`` over one period."""
        return max_abs(self.coeffs[0], self.period)


def max_abs(coeffs: np.ndarray, period: float, n_grid: int = 2048) -> float:
    """Maximum of ``|u|`` for a real series, refined past the sampling grid."""
    k = 2.0 * math.pi / period
    x = np.arange(n_grid) * (period / n_grid)
    vals = np.abs(fourier.synthesize(coeffs, n_grid).real)
    j = int(np.argmax(vals))
    h = period / n_grid

    def neg(t):
        return -abs(fourier.evaluate(coeffs, t, k).real)

    res = minimize_scalar(neg, bounds=(x[j] - h, x[j] + h), method="bounded",
                          options={"xatol": 1e-12 * period})
    return float(max(vals[j], -res.fun))


def derivative_rows(phi_hat: np.ndarray, period: float) -> np.ndarray:
    """Stack ``phi``, ``phi'``, ``phi''`` coefficients from those of ``phi``."""
    K = (len(phi_hat) - 1) // 2
    ik = 1j * fourier.modes(K) * (2.0 * math.pi / period)
    return np.vstack([phi_hat, ik * phi_hat, ik * ik * phi_hat])


def _hermitian(half: np.ndarray) -> np.ndarray:
    """Full centered series ``-M..M`` from modes ``0..M`` of a real function."""
    return np.concatenate([np.conj(half[:0:-1]), half])


def _make_profile(phi_hat, period, eps, params, residual=None):
    M = (len(phi_hat) - 1) // 2
    phi_hat = np.array(phi_hat, dtype=complex)
    # enforce exact conjugate symmetry and a real mean
    phi_hat = 0.5 * (phi_hat + np.conj(phi_hat[::-1]))
    coeffs = derivative_rows(phi_hat, period)
    prof = WaveProfile(eps=float(eps), c=params.c0 + float(eps), period=float(period),
                       coeffs=coeffs, residual=0.0, params=params)
    if residual is None:
        residual = profile_residual(prof)
    return replace(prof, residual=float(residual))


def profile_residual(profile: WaveProfile, n_grid: int | None = None) -> float:
    """Sup-norm of the profile-equation residual on ``4M`` equispaced points."""
    phi_hat = profile.coeffs[0]
    M = profile.M
    n = n_grid or max(4 * M, 2 * M + 1)
    K = fourier.modes(M) * profile.wavenumber
    d = [fourier.synthesize(phi_hat * (1j * K) ** j, n).real for j in range(4)]
    p = profile.params
    res = d[3] - d[2] - profile.c * d[1] + p.alpha * d[0] * d[1] - p.r * d[0] * (1.0 - d[0])
    return float(np.max(np.abs(res)))


def initial_guess(eps: float, params: Params, M: int = DEFAULT_M) -> WaveProfile:
    """Linear Hopf predictor ``2 sqrt(eps) Re(exp(i omega0 xi) v)``.

    ``v = (1, i omega0, -omega0^2)`` spans the eigenspace of the linearization
    at the origin for the eigenvalue ``i omega0`` at the critical speed.
    """
    if not 0.0 <= eps <= EPS_MAX:
        raise ValueError(f"eps must lie in [0, {EPS_MAX}], got {eps!r}")
    phi_hat = np.zeros(2 * M + 1, dtype=complex)
    phi_hat[M + 1] = phi_hat[M - 1] = math.sqrt(eps)
    return _make_profile(phi_hat, params.L0, eps, params)


def constant_coefficient_profile(params: Params, M: int = DEFAULT_M) -> WaveProfile:
    """The zero profile at the critical speed (the ``eps -> 0`` limit)."""
    return initial_guess(0.0, params, M)


# ---------------------------------------------------------------------------
# Newton iteration


def _unpack(u, M):
    half = np.empty(M + 1, dtype=complex)
    half[0] = u[0]
    half[1:] = u[1:2 * M + 1:2] + 1j * u[2:2 * M + 1:2]
    return half, u[-1]


def _pack(half, period):
    M = len(half) - 1
    u = np.empty(2 * M + 2)
    u[0] = half[0].real
    u[1:2 * M + 1:2] = half[1:].real
    u[2:2 * M + 1:2] = half[1:].imag
    u[-1] = period
    return u


def _symbol(k, omega, c, r):
    ikw = 1j * k * omega
    return ikw**3 - ikw**2 - c * ikw - r


def _dsymbol(k, omega, c):
    ik = 1j * k
    return 3 * ik**3 * omega**2 - 2 * ik**2 * omega - c * ik


def _galerkin(half, period, c, params):
    """Modes ``0..M`` of the profile-equation residual and of ``phi^2``."""
    M = len(half) - 1
    full = _hermitian(half)
    sq = fourier.square(full)[M:]
    k = np.arange(M + 1)
    omega = 2.0 * math.pi / period
    nl = params.r + 0.5j * params.alpha * k * omega
    return _symbol(k, omega, c, params.r) * half + nl * sq, full, sq


def _residual_vector(u, c, params):
    M = (len(u) - 2) // 2
    half, period = _unpack(u, M)
    R, _, _ = _galerkin(half, period, c, params)
    out = np.empty(2 * M + 2)
    out[0] = R[0].real
    out[1:2 * M + 1:2] = R[1:].real
    out[2:2 * M + 1:2] = R[1:].imag
    out[-1] = half[1].imag
    return out


def _jacobian_matrix(u, c, params):
    M = (len(u) - 2) // 2
    half, period = _unpack(u, M)
    R, full, sq = _galerkin(half, period, c, params)
    omega = 2.0 * math.pi / period
    k = np.arange(M + 1)
    nl = params.r + 0.5j * params.alpha * k * omega

    # dR_k/dc_j for k = 0..M, j = -M..M (c_j and c_{-j} independent)
    j = np.arange(-M, M + 1)
    shift = k[:, None] - j[None, :]
    inside = np.abs(shift) <= M
    conv = np.where(inside, full[np.clip(shift + M, 0, 2 * M)], 0.0)
    dRdc = 2.0 * nl[:, None] * conv
    dRdc[k, k + M] += _symbol(k, omega, c, params.r)

    cols = np.empty((M + 1, 2 * M + 2), dtype=complex)
    cols[:, 0] = dRdc[:, M]
    plus = dRdc[:, M + 1:]
    minus = dRdc[:, M - 1::-1]
    cols[:, 1:2 * M + 1:2] = plus + minus
    cols[:, 2:2 * M + 1:2] = 1j * (plus - minus)
    dRdw = _dsymbol(k, omega, c) * half + 0.5j * params.alpha * k * sq
    cols[:, -1] = dRdw * (-omega / period)

    J = np.zeros((2 * M + 2, 2 * M + 2))
    J[0] = cols[0].real
    J[1:2 * M + 1:2] = cols[1:].real
    J[2:2 * M + 1:2] = cols[1:].imag
    J[-1, 2] = 1.0
    return J


def solve_orbit(guess: WaveProfile, M: int = DEFAULT_M, tol: float = 1e-11,
                max_iter: int = MAX_ITER) -> WaveProfile:
    """Newton iteration on the harmonic-balance system from ``guess``.

    The speed ``c = -r + eps`` is held fixed.  Steps are halved (at most
    eight times) while the Galerkin residual grows.

    Raises
    ------
    NoConvergence
        If ``max_iter`` iterations do not bring the residual below ``tol``.
    CollapsedToZero
        If the iterate loses its oscillating part.
    """
    if M < 8:
        raise ValueError("M must be at least 8")
    if tol <= 0:
        raise ValueError("tol must be positive")
    params, c, eps = guess.params, guess.c, guess.eps
    phi_hat = fourier.resize(guess.coeffs[0], M)
    if np.max(np.abs(phi_hat[M + 1:])) == 0.0:
        raise ValueError("guess must have a nonzero oscillating part")
    # rotate the guess so that Im(phi_hat[1]) = 0
    a1 = phi_hat[M + 1]
    if abs(a1) > 0:
        rot = np.exp(-1j * np.angle(a1) * fourier.modes(M))
        phi_hat = phi_hat * rot
    u = _pack(phi_hat[M:], guess.period)

    F = _residual_vector(u, c, params)
    fnorm = np.linalg.norm(F, np.inf)
    for it in range(1, max_iter + 1):
        J = _jacobian_matrix(u, c, params)
        try:
            du = sla.lu_solve(sla.lu_factor(J, check_finite=True), -F)
        except (sla.LinAlgError, ValueError) as exc:
            raise NoConvergence(f"singular Newton matrix at iteration {it}: {exc}", eps) from exc
        step = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = u + step * du
            if trial[-1] > 0:
                F_trial = _residual_vector(trial, c, params)
                f_trial = np.linalg.norm(F_trial, np.inf)
                if np.isfinite(f_trial) and f_trial <= fnorm:
                    break
            step *= 0.5
        u, F, fnorm = trial, F_trial, f_trial
        half, period = _unpack(u, M)
        if np.max(np.abs(half[1:])) < 1e-12:
            raise CollapsedToZero(f"orbit collapsed to the rest state at eps={eps!r}", eps)
        small_step = np.linalg.norm(step * du[:-1], np.inf) <= 1e-13 * max(1.0, np.linalg.norm(u[:-1], np.inf))
        if fnorm <= 1e-14 or small_step:
            prof = _make_profile(_hermitian(half), period, eps, params)
            if prof.residual <= tol:
                log.debug("eps=%g converged in %d iterations, residual %.2e", eps, it, prof.residual)
                return prof
    half, period = _unpack(u, M)
    prof = _make_profile(_hermitian(half), period, eps, params)
    if prof.residual <= tol:
        return prof
    raise NoConvergence(
        f"Newton did not converge in {max_iter} iterations at eps={eps!r} "
        f"(residual {prof.residual:.3e})", eps)


def iter_family(eps_grid, params: Params, M: int = DEFAULT_M, tol: float = 1e-11):
    """Yield converged orbits along an ascending ``eps`` grid.

    The first orbit starts from the Hopf predictor, each later one from the
    previous converged orbit (natural-parameter continuation).  Solver
    errors are re-raised tagged with the failing ``eps``.
    """
    grid = [float(e) for e in eps_grid]
    if not grid:
        raise ValueError("eps_grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("eps_grid must be strictly ascending")
    if grid[0] <= 0 or grid[-1] > EPS_MAX:
        raise ValueError(f"eps values must lie in (0, {EPS_MAX}]")
    guess = initial_guess(grid[0], params, M)
    for eps in grid:
        guess = replace(guess, eps=eps, c=params.c0 + eps)
        try:
            guess = solve_orbit(guess, M=M, tol=tol)
        except (NoConvergence, CollapsedToZero) as exc:
            raise type(exc)(f"eps={eps!r}: {exc}", eps) from exc
        yield guess


def continue_family(eps_grid, params: Params, M: int = DEFAULT_M, tol: float = 1e-11) -> list[WaveProfile]:
    """All orbits of :func:`iter_family` as a list."""
    return list(iter_family(eps_grid, params, M, tol))


def evaluate_profile(profile: WaveProfile, xi) -> StateVec:
    """Fourier synthesis of ``(phi, phi', phi'')`` at ``xi``."""
    vals = [float(fourier.evaluate(row, xi, profile.wavenumber).real) for row in profile.coeffs]
    return StateVec(*vals)


def sample_profile(profile: WaveProfile, n: int = 512):
    """``(xi, Phi)`` on ``n`` equispaced points of one period, ``Phi`` of shape ``(3, n)``."""
    xi = np.arange(n) * (profile.period / n)
    return xi, np.vstack([fourier.synthesize(row, n).real for row in profile.coeffs])


def rk4_flow(state, c: float, params: Params, duration: float, n_steps: int) -> np.ndarray:
    """Classical fixed-step Runge-Kutta integration of ``Phi' = F(Phi)``."""
    y = np.asarray(state, dtype=float).copy()
    h = duration / n_steps

    def f(z):
        return np.asarray(vector_field(z, c, params))

    for _ in range(n_steps):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def shooting_defect(profile: WaveProfile, n_steps: int = 4096) -> float:
    """Distance between ``Phi(0)`` and its RK4 image after one period."""
    start = np.array(evaluate_profile(profile, 0.0))
    end = rk4_flow(start, profile.c, profile.params, profile.period, n_steps)
    return float(np.max(np.abs(end - start)))


# ---------------------------------------------------------------------------
# persistence


def profile_to_dict(profile: WaveProfile, meta: dict | None = None) -> dict:
    p = profile.params
    doc = {
        "r": p.r,
        "alpha": p.alpha,
        "eps": profile.eps,
        "c": profile.c,
        "period": profile.period,
        "M": profile.M,
        "coeffs": [[float(z.real), float(z.imag)] for z in profile.coeffs[0]],
        "residual": profile.residual,
    }
    if meta:
        doc["meta"] = meta
    return doc


def profile_from_dict(doc: dict) -> WaveProfile:
    params = Params(doc["r"], doc["alpha"])
    phi_hat = np.array([complex(re, im) for re, im in doc["coeffs"]])
    M = int(doc["M"])
    if len(phi_hat) != 2 * M + 1:
        raise ValueError(f"expected {2 * M + 1} coefficients, found {len(phi_hat)}")
    return WaveProfile(eps=float(doc["eps"]), c=float(doc["c"]), period=float(doc["period"]),
                       coeffs=derivative_rows(phi_hat, float(doc["period"])),
                       residual=float(doc["residual"]), params=params)


def save_profile(profile: WaveProfile, path, meta: dict | None = None) -> Path:
    path = Path(path)
    path.write_text(json.dumps(profile_to_dict(profile, meta), indent=1) + "\n", newline="\n")
    return path


def load_profile(path) -> WaveProfile:
    return profile_from_dict(json.loads(Path(path).read_text()))
