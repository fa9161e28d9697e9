import math
from dataclasses import replace

import numpy as np
import pytest

from floquet_kdvbf.bloch import assemble_bloch, linearized_coeffs
from floquet_kdvbf.errors import EigFailure
from floquet_kdvbf.model import Params
from floquet_kdvbf.orbit import constant_coefficient_profile
from floquet_kdvbf.spectrum import (
    CSV_COLUMNS,
    FloquetSpectrum,
    convergence_study,
    eig_dense,
    floquet_sweep,
    read_spectrum_csv,
    slice_from_matrices,
    theta_grid,
    verdict,
    worker_count,
    write_spectrum_csv,
)


@pytest.fixture(scope="module")
def small_spectrum(small_wave):
    return floquet_sweep(small_wave, n_theta=16, N=16)


def test_eig_dense_examples():
    assert np.allclose(np.sort(eig_dense(np.diag([3.0, -1.0, 2.0])).real), [-1, 2, 3])
    lam = eig_dense(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert np.allclose(sorted(lam, key=lambda z: z.imag), [-1j, 1j], atol=1e-15)


def test_eig_dense_rejects_nonfinite():
    with pytest.raises(EigFailure):
        eig_dense(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_theta_grid():
    g = theta_grid(8)
    assert len(g) == 8 and g[-1] == pytest.approx(math.pi) and g[0] > -math.pi
    assert np.any(g == 0.0)
    with pytest.raises(ValueError):
        theta_grid(2)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("FLOQUET_KDVBF_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("FLOQUET_KDVBF_THREADS", "zero")
    assert worker_count() >= 1


def test_rest_state_sweep_maximum_is_r():
    for r in (1.0, 2.0):
        spec = floquet_sweep(constant_coefficient_profile(Params(r, 1.0)), n_theta=16, N=12)
        assert spec.max_real == pytest.approx(r, rel=1e-12)
        assert spec.argmax_theta == 0.0
        assert spec.unstable


def test_scaling_identity(small_spectrum):
    L3 = small_spectrum.period**3
    for sl in small_spectrum.slices:
        assert sl.scale == L3
        assert np.allclose(sl.unscaled * L3, sl.scaled, rtol=1e-15, atol=0)
        assert np.all(np.diff(sl.unscaled.real) <= 0)


def test_conjugation_symmetry(small_wave):
    # real coefficients: the spectrum at -theta is the conjugate of that at theta
    cs = linearized_coeffs(small_wave)
    L = small_wave.period
    for theta in (0.4, 2.0):
        sl = slice_from_matrices(assemble_bloch(theta, cs, L, 16), assemble_bloch(theta, cs, L, 32))
        mirror = eig_dense(assemble_bloch(-theta, cs, L, 32))
        for z in sl.scaled[sl.kept_mask]:
            assert np.min(np.abs(np.conj(mirror) - z)) <= 1e-8 * max(1.0, abs(z))


def test_small_wave_is_unstable(small_spectrum):
    v = verdict(small_spectrum)
    assert v.unstable and v.max_re_lambda > 0
    assert v.discrepancy <= 1e-8
    assert 0 < v.n_kept <= v.n_total
    assert set(v.to_dict()) >= {"eps", "unstable", "max_re_lambda", "argmax_theta"}
    assert "UNSTABLE" in v.summary()


def test_manufactured_stable_spectrum(small_wave):
    """Shifting every Bloch matrix by -10 r L0^3 must flip the verdict."""
    cs = linearized_coeffs(small_wave)
    L = small_wave.period
    shift = 10 * small_wave.params.r * small_wave.params.L0**3
    slices = []
    for theta in theta_grid(8):
        coarse, fine = assemble_bloch(theta, cs, L, 12), assemble_bloch(theta, cs, L, 24)
        coarse = replace(coarse, entries=coarse.entries - shift * np.eye(25))
        fine = replace(fine, entries=fine.entries - shift * np.eye(49))
        slices.append(slice_from_matrices(coarse, fine))
    spec = FloquetSpectrum(slices=slices, eps=small_wave.eps, period=L, N=12)
    assert not spec.unstable
    assert spec.max_real < 0
    assert "stable" in verdict(spec).summary()


def test_sweep_is_deterministic_across_workers(small_wave):
    a = floquet_sweep(small_wave, n_theta=8, N=12, workers=1)
    b = floquet_sweep(small_wave, n_theta=8, N=12, workers=4)
    for sa, sb in zip(a.slices, b.slices):
        assert np.array_equal(sa.scaled, sb.scaled)


def test_csv_round_trip(small_spectrum, tmp_path):
    path = write_spectrum_csv(small_spectrum, tmp_path / "s.csv", comment="demo header")
    raw = path.read_bytes()
    assert raw.startswith(b"# demo header\n") and b"\r" not in raw
    assert raw.splitlines()[1].decode() == ",".join(CSV_COLUMNS)
    cols = read_spectrum_csv(path)
    n_kept = sum(s.kept for s in small_spectrum.slices)
    assert len(cols["theta"]) == n_kept and cols["kept_at_2N"].all()
    assert np.max(cols["re_lambda"]) == small_spectrum.max_real
    full = read_spectrum_csv(write_spectrum_csv(small_spectrum, tmp_path / "t.csv", include_rejected=True))
    assert len(full["theta"]) == sum(len(s.scaled) for s in small_spectrum.slices)


def test_convergence_study(family):
    table = convergence_study(family, N=24)
    assert table.reference == pytest.approx((2 * math.pi) ** 3)
    assert table.monotone
    assert np.all(table.distance <= 3 * np.sqrt(table.eps) * table.reference)
    # measured: the distance shrinks like eps, i.e. exponent 2 in sqrt(eps)
    assert table.exponent() == pytest.approx(2.0, abs=0.1)
    assert len(table.rows()) == len(family)


def test_convergence_study_needs_sorted(family):
    with pytest.raises(ValueError):
        convergence_study(family[::-1])
