import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.integrate import quad

from floquet_kdvbf.bloch import (
    assemble_bloch,
    assemble_split,
    check_theta,
    derivative_norms,
    interpolation_margins,
    linearized_coeffs,
    multiplication_matrix,
    perturbation_split,
    quasi_periodic_reconstruct,
    random_real_trig_poly,
)
from floquet_kdvbf.errors import ThetaOutOfRange
from floquet_kdvbf.model import Params
from floquet_kdvbf.orbit import constant_coefficient_profile, evaluate_profile
from floquet_kdvbf.spectrum import eig_dense


@pytest.fixture(scope="module")
def rest():
    return constant_coefficient_profile(Params(1.0, 1.0))


def test_rest_state_matrix_is_diagonal_symbol(rest):
    p = rest.params
    theta = 0.7
    A = assemble_bloch(theta, linearized_coeffs(rest), p.L0, 8).entries
    assert np.count_nonzero(A - np.diag(np.diag(A))) == 0
    mu = theta + 2 * math.pi * np.arange(-8, 9)
    sym = 1j * mu**3 - p.L0 * mu**2 + 1j * p.L0**2 * p.c0 * mu + p.L0**3 * p.r
    assert np.allclose(np.diag(A), sym, rtol=1e-14, atol=1e-11)


def test_rest_state_theta_zero_has_r_L0_cubed(rest):
    A = assemble_bloch(0.0, linearized_coeffs(rest), rest.params.L0, 8)
    assert A.entries[8, 8] == pytest.approx((2 * math.pi) ** 3, rel=1e-15)
    assert (2 * math.pi) ** 3 == pytest.approx(248.0502134, abs=1e-7)
    assert A.scale == pytest.approx(A.entries[8, 8].real, rel=1e-15)


def test_rest_state_n_plus_minus_one_vanish(rest):
    # mu = +-2 pi: i mu^3 - 2 pi mu^2 - 4 pi^2 i mu + 8 pi^3 = 0
    d = np.diag(assemble_bloch(0.0, linearized_coeffs(rest), rest.params.L0, 8).entries)
    assert abs(d[7]) < 1e-10 and abs(d[9]) < 1e-10


def test_columns_against_collocation(small_wave):
    """Apply the operator to exp(i mu_n x / L) on a grid, then project."""
    prof = small_wave
    p, L, N = prof.params, prof.period, 6
    theta = 0.9
    A = assemble_bloch(theta, linearized_coeffs(prof), L, N).entries
    n_grid = 256
    x = np.arange(n_grid) * L / n_grid
    Phi = np.array([evaluate_profile(prof, xi) for xi in x]).T
    a1 = prof.c - p.alpha * Phi[0]
    a0 = p.r * (1 - 2 * Phi[0]) - p.alpha * Phi[1]
    for j, n in enumerate(range(-N, N + 1)):
        ik = 1j * (theta + 2 * math.pi * n) / L
        # the theta phase is factored out; the periodic part is exp(2 pi i n x / L)
        Lv = L**3 * (-(ik**3) + ik**2 + a1 * ik + a0) * np.exp(2j * math.pi * n * x / L)
        col = np.fft.fft(Lv) / n_grid
        expect = np.array([col[m % n_grid] for m in range(-N, N + 1)])
        assert np.max(np.abs(expect - A[:, j])) <= 1e-8 * max(1.0, np.max(np.abs(A[:, j])))


def test_coefficient_means_against_quadrature(small_wave):
    prof = small_wave
    p, L = prof.params, prof.period
    cs = linearized_coeffs(prof)
    K = (len(cs.a0_hat) - 1) // 2

    def a0(x):
        phi, dphi, _ = evaluate_profile(prof, x)
        return p.r * (1 - 2 * phi) - p.alpha * dphi

    mean_a0 = quad(a0, 0, L, epsabs=1e-14, limit=200)[0] / L
    assert cs.a0_hat[K].real == pytest.approx(mean_a0, abs=1e-12)
    assert cs.a1_hat[K].real == pytest.approx(prof.c - p.alpha * prof.mean, abs=1e-15)
    # real coefficients have conjugate-symmetric series
    assert np.allclose(cs.a1_hat, np.conj(cs.a1_hat[::-1]), atol=1e-16)


def test_multiplication_matrix_is_toeplitz():
    c = np.array([1, 2, 3, 4, 5], dtype=complex)  # modes -2..2
    T = multiplication_matrix(c, 3)
    assert T.shape == (7, 7)
    assert T[3, 3] == 3 and T[4, 3] == 4 and T[3, 4] == 2 and T[0, 6] == 0
    assert T[6, 4] == 5 and T[6, 3] == 0


def test_split_reassembles(family):
    for prof in family:
        split = perturbation_split(prof)
        theta = -1.3
        A = assemble_bloch(theta, linearized_coeffs(prof), prof.period, 12).entries
        A0, A1 = assemble_split(theta, split, 12)
        rebuilt = A0 + split.sqrt_eps * A1
        assert np.max(np.abs(rebuilt - A)) <= 1e-12 * np.max(np.abs(A))
        assert split.L0**2 * split.c0 == pytest.approx(-4 * math.pi**2)


def test_split_coefficients_stay_bounded(family):
    b1 = [perturbation_split(p).b1_sup_bound() for p in family]
    b0 = [perturbation_split(p).b0_sup_bound() for p in family]
    b2 = [abs(perturbation_split(p).b2) for p in family]
    # O(1) as eps -> 0, in fact shrinking like sqrt(eps) in the smoother parts
    for seq in (b1, b0, b2):
        assert max(seq) < 1e3
        assert seq[0] <= seq[-1] * 1.01


def test_split_needs_positive_eps(rest):
    with pytest.raises(ValueError):
        perturbation_split(rest)


def test_reconstruction_is_quasi_periodic(small_wave):
    prof = small_wave
    theta = 1.1
    A = assemble_bloch(theta, linearized_coeffs(prof), prof.period, 16)
    lam, vec = np.linalg.eig(A.entries)
    k = int(np.argmax(lam.real))
    for order in (0, 1, 2):
        x, v = quasi_periodic_reconstruct(vec[:, k], theta, prof.period, order=order)
        assert x[0] == 0.0 and x[-1] == prof.period
        assert v[-1] == pytest.approx(np.exp(1j * theta) * v[0], abs=1e-12)


def test_reconstruction_derivative_matches_difference(small_wave):
    prof = small_wave
    w = np.zeros(9, dtype=complex)
    w[4], w[5] = 1.0, 0.3j
    x, v = quasi_periodic_reconstruct(w, 0.4, prof.period, n_samples=4001)
    _, dv = quasi_periodic_reconstruct(w, 0.4, prof.period, n_samples=4001, order=1)
    fd = np.gradient(v, x)
    assert np.max(np.abs(fd[1:-1] - dv[1:-1])) < 1e-4


@pytest.mark.parametrize("theta", [-math.pi, 3.2, math.nan, 10.0])
def test_theta_out_of_range(theta, rest):
    with pytest.raises(ThetaOutOfRange):
        assemble_bloch(theta, linearized_coeffs(rest), rest.period, 8)


def test_theta_range_accepts_pi():
    assert check_theta(math.pi) == math.pi
    assert issubclass(ThetaOutOfRange, ValueError)


def test_truncation_convergence(small_wave):
    cs = linearized_coeffs(small_wave)
    lam_n = eig_dense(assemble_bloch(0.5, cs, small_wave.period, 24))
    lam_2n = eig_dense(assemble_bloch(0.5, cs, small_wave.period, 48))
    # the low-frequency part of the spectrum agrees across truncations
    low = lam_n[np.abs(lam_n) < 1e4]
    assert len(low) >= 5
    for z in low:
        assert np.min(np.abs(lam_2n - z)) <= 1e-8


def test_derivative_norms_of_cosine():
    # u = cos(2y) on [0, pi]: |u| = sqrt(pi/2), each derivative multiplies by 2
    u = np.array([0.5, 0, 0.5], dtype=complex)
    n = derivative_norms(u)
    assert np.allclose(n, math.sqrt(math.pi / 2) * 2.0 ** np.arange(4), rtol=1e-14)


def test_interpolation_on_random_polynomials():
    rng = np.random.default_rng(5)
    for _ in range(200):
        u = random_real_trig_poly(rng, 16)
        assert np.allclose(u, np.conj(u[::-1]))
        for delta in (0.1, 0.5, 1.0, 2.0):
            m2, m1 = interpolation_margins(u, delta)
            assert m2 >= 0 and m1 >= 0


coef = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=150, deadline=None)
@given(half=arrays(np.float64, 18, elements=coef), delta=st.floats(0.05, 5.0))
def test_interpolation_property(half, delta):
    z = half[:9] + 1j * half[9:]
    z[0] = z[0].real
    u = np.concatenate([np.conj(z[:0:-1]), z])
    scale = max(1.0, derivative_norms(u)[3])
    m2, m1 = interpolation_margins(u, delta)
    assert m2 >= -1e-12 * scale and m1 >= -1e-12 * scale
