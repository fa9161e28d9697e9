"""Acceptance checks, shared by ``floquet-kdvbf verify`` and the test suite.

Every check returns a :class:`CheckResult`; nothing here raises on a failed
criterion.  Tolerances come from ``RunConfig.tolerances``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import bloch, hopf, orbit, spectrum
from .config import RunConfig
from .model import Params

HOPF_R_VALUES = (0.25, 0.5, 1.0, 2.0, 4.0)
N_RANDOM_POLYS = 200
DELTAS = (0.1, 0.5, 1.0, 2.0)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s, budget {self.budget:g}s)"


class Context:
    """Lazily computed orbit family and spectra shared between checks."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.params = Params(cfg.r, cfg.alpha)

    @cached_property
    def family(self):
        return orbit.continue_family(self.cfg.eps_grid, self.params, self.cfg.fourier_M, self.cfg.tol)

    @cached_property
    def spectra(self):
        return [spectrum.floquet_sweep(p, self.cfg.n_theta, self.cfg.bloch_N) for p in self.family]

    @cached_property
    def convergence(self):
        return spectrum.convergence_study(self.family, self.cfg.bloch_N)


def _timed(number, name, budget, fn):
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported not raised
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if passed and dt > budget:
        passed, detail = False, f"{detail}; over runtime budget"
    return CheckResult(number, name, bool(passed), detail, dt, budget)


def check_hopf_location(ctx):
    tol = ctx.cfg.tolerances["hopf_location"]
    errs = [abs(hopf.detect_hopf(Params(r, ctx.cfg.alpha)).c_star + r) for r in HOPF_R_VALUES]
    return max(errs) <= tol, f"max |c* + r| = {max(errs):.2e} (tol {tol:g})"


def check_transversality(ctx):
    tol = ctx.cfg.tolerances["slope"]
    rows = []
    for r in HOPF_R_VALUES:
        s = hopf.detect_hopf(Params(r, ctx.cfg.alpha)).slope
        rows.append((r, s, abs(s - 1.0 / (2.0 * (r + 1.0)))))
    worst = max(rows, key=lambda t: t[2])
    return worst[2] <= tol, (f"max |slope - 1/(2(r+1))| = {worst[2]:.2e} (tol {tol:g}); "
                             f"r={worst[0]:g}: slope {worst[1]:.6f} vs {1 / (2 * (worst[0] + 1)):.6f}")


def check_amplitude_scaling(ctx):
    tol = ctx.cfg.tolerances["amplitude_exponent"]
    eps = np.array([p.eps for p in ctx.family])
    amp = np.array([p.amplitude() for p in ctx.family])
    slope = np.polyfit(np.log(eps), np.log(amp), 1)[0]
    return abs(slope - 0.5) <= tol, f"log-log slope {slope:.4f} (0.5 +/- {tol:g})"


def check_period_scaling(ctx):
    K = ctx.cfg.tolerances["period_constant"]
    ratio = max(abs(p.period - ctx.params.L0) / p.eps for p in ctx.family)
    return ratio <= K, f"max |L - L0|/eps = {ratio:.4f} (cap {K:g})"


def check_shooting(ctx):
    tol = ctx.cfg.tolerances["shooting"]
    worst = max(orbit.shooting_defect(p) for p in ctx.family)
    return worst <= tol, f"max RK4 return defect {worst:.2e} (tol {tol:g})"


def check_symbol(ctx):
    tol = ctx.cfg.tolerances["symbol"]
    p = ctx.params
    N = ctx.cfg.bloch_N
    coeffs = bloch.linearized_coeffs(orbit.constant_coefficient_profile(p, ctx.cfg.fourier_M))
    worst = 0.0
    for theta in spectrum.theta_grid(ctx.cfg.n_theta):
        lam = spectrum.eig_dense(bloch.assemble_bloch(theta, coeffs, p.L0, N))
        mu = theta + 2.0 * math.pi * np.arange(-N, N + 1)
        sym = 1j * mu**3 - p.L0 * mu**2 + 1j * p.L0**2 * p.c0 * mu + p.L0**3 * p.r
        used = np.zeros(len(sym), dtype=bool)
        for z in lam:
            d = np.abs(sym - z)
            d[used] = np.inf
            k = int(np.argmin(d))
            used[k] = True
            worst = max(worst, d[k] / max(1.0, abs(sym[k])))
    return worst <= tol, f"max relative mismatch {worst:.2e} over {ctx.cfg.n_theta} theta (tol {tol:g})"


def check_unperturbed(ctx):
    tol = ctx.cfg.tolerances["unperturbed"]
    p = ctx.params
    coeffs = bloch.linearized_coeffs(orbit.constant_coefficient_profile(p, ctx.cfg.fourier_M))
    lam = spectrum.eig_dense(bloch.assemble_bloch(0.0, coeffs, p.L0, ctx.cfg.bloch_N))
    ref = p.r * p.L0**3
    d = float(np.min(np.abs(lam - ref)))
    return d <= tol * ref, f"min |lam - r L0^3| = {d:.2e}, r L0^3 = {ref:.6f}"


def check_main_theorem(ctx):
    factor = ctx.cfg.tolerances["distance_factor"]
    mono = ctx.cfg.tolerances["monotone"]
    unstable = all(s.unstable for s in ctx.spectra)
    conv = ctx.convergence
    bound = factor * np.sqrt(conv.eps) * conv.reference
    within = bool(np.all(conv.distance <= bound))
    monotone = bool(np.all(np.diff(conv.distance) >= -mono))
    detail = (f"unstable at all {len(ctx.spectra)} eps: {unstable}; "
              f"distance/(sqrt(eps) r L0^3) max {np.max(conv.distance / (np.sqrt(conv.eps) * conv.reference)):.4f} "
              f"(cap {factor:g}); monotone: {monotone}; exponent in sqrt(eps) {conv.exponent():.3f}")
    return unstable and within and monotone, detail


def check_interpolation(ctx):
    rng = np.random.default_rng(20240101)
    violations = 0
    worst = math.inf
    for _ in range(N_RANDOM_POLYS):
        u = bloch.random_real_trig_poly(rng, 16)
        n0 = bloch.derivative_norms(u)[0]
        for delta in DELTAS:
            m2, m1 = bloch.interpolation_margins(u, delta)
            # tiny negative slack would be quadrature round-off
            slack = 1e-12 * max(1.0, n0)
            violations += (m2 < -slack) + (m1 < -slack)
            worst = min(worst, m2, m1)
    return violations == 0, f"{violations} violations in {N_RANDOM_POLYS}x{len(DELTAS)} cases, min margin {worst:.3e}"


def check_truncation(ctx):
    tol = ctx.cfg.tolerances["truncation"]
    used = [s.argmax_discrepancy for s in ctx.spectra]
    # eigenvalues of the convergence study, re-checked against 2N directly
    for prof, lam in zip(ctx.family, ctx.convergence.eigenvalue):
        coeffs = bloch.linearized_coeffs(prof)
        fine = spectrum.eig_dense(bloch.assemble_bloch(0.0, coeffs, prof.period, 2 * ctx.cfg.bloch_N))
        used.append(float(np.min(np.abs(fine - lam))))
    worst = max(used)
    return worst <= tol, f"max N vs 2N discrepancy of verdict eigenvalues {worst:.2e} (tol {tol:g})"


CHECKS = (
    (1, "Hopf location", 1.0, check_hopf_location),
    (2, "Transversality slope", 1.0, check_transversality),
    (3, "Amplitude scaling", 30.0, check_amplitude_scaling),
    (4, "Period scaling", 30.0, check_period_scaling),
    (5, "Orbit shooting oracle", 10.0, check_shooting),
    (6, "Constant-coefficient symbol", 20.0, check_symbol),
    (7, "Unperturbed eigenvalue r L0^3", 1.0, check_unperturbed),
    (8, "Spectral instability, eps -> 0", 120.0, check_main_theorem),
    (9, "Interpolation inequalities", 5.0, check_interpolation),
    (10, "Truncation robustness", 120.0, check_truncation),
)


def run_check(number: int, ctx: Context) -> CheckResult:
    for num, name, budget, fn in CHECKS:
        if num == number:
            return _timed(num, name, budget, lambda: fn(ctx))
    raise KeyError(number)


def run_all(cfg: RunConfig) -> list[CheckResult]:
    ctx = Context(cfg)
    return [run_check(num, ctx) for num, *_ in CHECKS]
