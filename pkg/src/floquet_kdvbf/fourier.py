"""Small helpers for real periodic functions stored as centered Fourier series.

A series of length ``2K + 1`` holds the coefficients of modes ``-K..K`` in
order, so index ``K`` is the mean.
"""

from __future__ import annotations

import numpy as np


def modes(K: int) -> np.ndarray:
    return np.arange(-K, K + 1)


def synthesize(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Values of the series on ``n`` equispaced points of one period.

    ``n`` must be at least ``2K + 1``; the result is complex (take ``.real``
    for real functions).
    """
    K = (len(coeffs) - 1) // 2
    if n < 2 * K + 1:
        raise ValueError(f"need at least {2 * K + 1} points, got {n}")
    buf = np.zeros(n, dtype=complex)
    buf[: K + 1] = coeffs[K:]
    if K:
        buf[-K:] = coeffs[:K]
    return np.fft.ifft(buf) * n


def analyze(values: np.ndarray, K: int) -> np.ndarray:
    """Centered coefficients ``-K..K`` of samples on an equispaced grid."""
    n = len(values)
    if n < 2 * K + 1:
        raise ValueError(f"need at least {2 * K + 1} samples, got {n}")
    spec = np.fft.fft(values) / n
    out = np.empty(2 * K + 1, dtype=complex)
    out[K:] = spec[: K + 1]
    if K:
        out[:K] = spec[-K:]
    return out


def resize(coeffs: np.ndarray, K: int) -> np.ndarray:
    """Zero-pad or truncate a centered series to modes ``-K..K``."""
    K0 = (len(coeffs) - 1) // 2
    out = np.zeros(2 * K + 1, dtype=complex)
    k = min(K, K0)
    out[K - k : K + k + 1] = coeffs[K0 - k : K0 + k + 1]
    return out


def evaluate(coeffs: np.ndarray, x, wavenumber: float) -> np.ndarray:
    """Direct evaluation of ``sum_k c_k exp(i k wavenumber x)`` at arbitrary points."""
    K = (len(coeffs) - 1) // 2
    x = np.asarray(x, dtype=float)
    phase = np.exp(1j * wavenumber * np.multiply.outer(x, modes(K)))
    return phase @ coeffs


def square(coeffs: np.ndarray) -> np.ndarray:
    """Coefficients ``-K..K`` of the square of a series.

    Products are formed on a grid of ``4K + 2`` points, enough to hold all
    ``4K + 1`` modes of the square, so the retained modes carry no aliasing.
    """
    K = (len(coeffs) - 1) // 2
    n = 4 * K + 2
    u = synthesize(coeffs, n)
    return analyze(u * u, K)
