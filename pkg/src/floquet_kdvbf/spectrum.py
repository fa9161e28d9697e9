"""Floquet spectrum of a periodic wave and the instability verdict.

Each Bloch matrix is solved at truncations ``N`` and ``2N``.  An eigenvalue
of the ``N`` problem is kept when the nearest ``2N`` eigenvalue lies within
``KEEP_TOL``; the rest are treated as truncation artifacts.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg as sla

from .bloch import DEFAULT_N, BlochMatrix, assemble_bloch, linearized_coeffs
from .errors import EigFailure
from .orbit import WaveProfile

KEEP_TOL = 1e-8
BACKWARD_TOL = 1e-10
DEFAULT_N_THETA = 64
THREADS_ENV = "FLOQUET_KDVBF_THREADS"

CSV_COLUMNS = ("eps", "theta", "re_lambda", "im_lambda", "re_lambda_scaled",
               "im_lambda_scaled", "kept_at_2N")


def worker_count() -> int:
    """Thread cap from ``FLOQUET_KDVBF_THREADS``, else the number of cores."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            n = 0
        if n >= 1:
            return n
    return os.cpu_count() or 1


def eig_dense(matrix, n_check: int = 5, seed: int = 0) -> np.ndarray:
    """All eigenvalues of a dense complex matrix.

    The backward error ``|A v - lam v| / |v|`` of ``n_check`` randomly chosen
    eigenpairs must stay below ``1e-10 |A|_F``.

    Raises
    ------
    EigFailure
        On LAPACK non-convergence, non-finite output, or a failed spot check.
    """
    theta = getattr(matrix, "theta", None)
    A = np.asarray(getattr(matrix, "entries", matrix))
    if not np.all(np.isfinite(A)):
        raise EigFailure("matrix has non-finite entries", theta)
    try:
        lam, vec = sla.eig(A, check_finite=False)
    except (sla.LinAlgError, ValueError) as exc:
        raise EigFailure(f"eigensolver failed: {exc}", theta) from exc
    if not np.all(np.isfinite(lam)):
        raise EigFailure("eigensolver returned non-finite eigenvalues", theta)
    norm = np.linalg.norm(A)
    rng = np.random.default_rng(seed)
    for k in rng.choice(len(lam), size=min(n_check, len(lam)), replace=False):
        v = vec[:, k]
        err = np.linalg.norm(A @ v - lam[k] * v) / np.linalg.norm(v)
        if err > BACKWARD_TOL * norm:
            raise EigFailure(f"backward error {err:.2e} exceeds {BACKWARD_TOL:g}*|A|", theta)
    return lam


@dataclass
class SpectrumSlice:
    """Eigenvalues of one Bloch operator, sorted by decreasing real part.

    ``scaled`` are eigenvalues of the Bloch matrix (``L^3 lambda``),
    ``unscaled`` the corresponding ``lambda``.  ``discrepancy`` is the
    distance from each eigenvalue to the nearest eigenvalue at double
    truncation.
    """

    theta: float
    scaled: np.ndarray
    unscaled: np.ndarray
    discrepancy: np.ndarray
    scale: float

    @property
    def kept_mask(self) -> np.ndarray:
        return self.discrepancy <= KEEP_TOL

    @property
    def kept(self) -> int:
        return int(np.count_nonzero(self.kept_mask))


def _nearest_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.min(np.abs(a[:, None] - b[None, :]), axis=1)


def slice_from_matrices(coarse: BlochMatrix, fine: BlochMatrix) -> SpectrumSlice:
    """Build a slice from the same Bloch operator at two truncations."""
    lam = eig_dense(coarse)
    lam_fine = eig_dense(fine)
    order = np.lexsort((-lam.imag, -lam.real))
    lam = lam[order]
    return SpectrumSlice(theta=coarse.theta, scaled=lam, unscaled=lam / coarse.scale,
                         discrepancy=_nearest_distance(lam, lam_fine), scale=coarse.scale)


@dataclass
class FloquetSpectrum:
    slices: list[SpectrumSlice]
    eps: float
    period: float
    N: int
    max_real: float = field(init=False)
    unstable: bool = field(init=False)
    argmax_theta: float = field(init=False)
    argmax_scaled: complex = field(init=False)
    argmax_discrepancy: float = field(init=False)

    def __post_init__(self):
        best = None
        for sl in self.slices:
            mask = sl.kept_mask
            if not mask.any():
                continue
            idx = np.flatnonzero(mask)
            k = idx[np.argmax(sl.unscaled[idx].real)]
            if best is None or sl.unscaled[k].real > best[0].unscaled[best[1]].real:
                best = (sl, k)
        if best is None:
            raise EigFailure("no eigenvalue survived the truncation filter")
        sl, k = best
        self.max_real = float(sl.unscaled[k].real)
        self.unstable = self.max_real > 0
        self.argmax_theta = sl.theta
        self.argmax_scaled = complex(sl.scaled[k])
        self.argmax_discrepancy = float(sl.discrepancy[k])

    def slice_at(self, theta: float) -> SpectrumSlice:
        return min(self.slices, key=lambda s: abs(s.theta - theta))


def theta_grid(n_theta: int) -> np.ndarray:
    """Uniform grid of ``n_theta`` Floquet exponents in ``(-pi, pi]``."""
    if n_theta < 3:
        raise ValueError("n_theta must be at least 3")
    return -math.pi + 2.0 * math.pi * np.arange(1, n_theta + 1) / n_theta


def _solve_theta(theta, coeffs, period, N):
    try:
        return slice_from_matrices(assemble_bloch(theta, coeffs, period, N),
                                   assemble_bloch(theta, coeffs, period, 2 * N))
    except EigFailure as exc:
        raise EigFailure(f"theta={theta!r}: {exc}", theta) from exc


def floquet_sweep(profile: WaveProfile, n_theta: int = DEFAULT_N_THETA, N: int = DEFAULT_N,
                  workers: int | None = None) -> FloquetSpectrum:
    """Bloch spectra over a uniform ``theta`` grid, solved in parallel."""
    thetas = theta_grid(n_theta)
    # the grid ends at exactly pi; rounding must not push it past
    thetas[-1] = math.pi
    coeffs = linearized_coeffs(profile)
    n_workers = max(1, min(workers or worker_count(), len(thetas)))

    def job(theta):
        return _solve_theta(float(theta), coeffs, profile.period, N)

    if n_workers == 1:
        slices = [job(t) for t in thetas]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            slices = list(pool.map(job, thetas))
    return FloquetSpectrum(slices=slices, eps=profile.eps, period=profile.period, N=N)


@dataclass
class ConvergenceTable:
    """Distance of the ``theta = 0`` spectrum to ``r L0^3`` along a family."""

    eps: np.ndarray
    distance: np.ndarray
    eigenvalue: np.ndarray
    reference: float

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.distance) >= -1e-10))

    def exponent(self) -> float:
        """Least-squares slope of ``log distance`` against ``log sqrt(eps)``."""
        x = np.log(np.sqrt(self.eps))
        y = np.log(self.distance)
        return float(np.polyfit(x, y, 1)[0])

    def rows(self):
        return list(zip(self.eps.tolist(), self.distance.tolist()))


def convergence_study(profiles, N: int = DEFAULT_N) -> ConvergenceTable:
    """Follow the eigenvalue branch that emanates from ``r L0^3``.

    For each profile the ``theta = 0`` eigenvalue (kept at ``N`` vs ``2N``)
    closest to ``r L0^3`` is recorded.
    """
    profiles = list(profiles)
    eps = np.array([p.eps for p in profiles], dtype=float)
    if np.any(np.diff(eps) < 0):
        raise ValueError("profiles must be sorted by ascending eps")
    params = profiles[0].params
    ref = params.r * params.L0**3
    dist, lams = [], []
    for prof in profiles:
        sl = _solve_theta(0.0, linearized_coeffs(prof), prof.period, N)
        cand = sl.scaled[sl.kept_mask]
        k = int(np.argmin(np.abs(cand - ref)))
        dist.append(abs(cand[k] - ref))
        lams.append(cand[k])
    return ConvergenceTable(eps=eps, distance=np.array(dist), eigenvalue=np.array(lams), reference=ref)


@dataclass
class Verdict:
    unstable: bool
    argmax_theta: float
    max_re_lambda: float
    lambda_scaled: complex
    discrepancy: float
    eps: float
    n_kept: int
    n_total: int

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "unstable": self.unstable,
            "max_re_lambda": self.max_re_lambda,
            "argmax_theta": self.argmax_theta,
            "lambda_scaled": [self.lambda_scaled.real, self.lambda_scaled.imag],
            "truncation_discrepancy": self.discrepancy,
            "kept_eigenvalues": self.n_kept,
            "total_eigenvalues": self.n_total,
        }

    def summary(self) -> str:
        state = "UNSTABLE" if self.unstable else "stable"
        return (f"eps={self.eps:g}: {state}; max Re(lambda)={self.max_re_lambda:.10g} "
                f"at theta={self.argmax_theta:.6g} (scaled {self.lambda_scaled.real:.10g}"
                f"{self.lambda_scaled.imag:+.3g}i, N/2N discrepancy {self.discrepancy:.1e}; "
                f"{self.n_kept}/{self.n_total} eigenvalues kept)")

    __str__ = summary


def verdict(spectrum: FloquetSpectrum) -> Verdict:
    return Verdict(
        unstable=spectrum.unstable,
        argmax_theta=spectrum.argmax_theta,
        max_re_lambda=spectrum.max_real,
        lambda_scaled=spectrum.argmax_scaled,
        discrepancy=spectrum.argmax_discrepancy,
        eps=spectrum.eps,
        n_kept=sum(s.kept for s in spectrum.slices),
        n_total=sum(len(s.scaled) for s in spectrum.slices),
    )


# ---------------------------------------------------------------------------
# CSV


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_spectrum_csv(spectrum: FloquetSpectrum, path, comment: str | None = None,
                       include_rejected: bool = False) -> Path:
    """One row per kept eigenvalue (all eigenvalues with ``include_rejected``)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for sl in spectrum.slices:
            for lam, lam_s, kept in zip(sl.unscaled, sl.scaled, sl.kept_mask):
                if not (kept or include_rejected):
                    continue
                w.writerow([_fmt(spectrum.eps), _fmt(sl.theta), _fmt(lam.real), _fmt(lam.imag),
                            _fmt(lam_s.real), _fmt(lam_s.imag), "true" if kept else "false"])
    return path


def read_spectrum_csv(path) -> dict[str, np.ndarray]:
    """Columns of a spectrum CSV as arrays (comment lines skipped)."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    out = {}
    for col in CSV_COLUMNS:
        vals = [row[col] for row in rows]
        out[col] = np.array([v == "true" for v in vals]) if col == "kept_at_2N" else np.array(vals, dtype=float)
    return out
