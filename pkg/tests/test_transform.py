import numpy as np
import pytest

import shapewave as sw

from conftest import make_tone


def naive_dft(values):
    """O(n^2) direct evaluation of the spectrum, the oracle for the FFT path."""
    values = np.asarray(values, dtype=complex)
    n = len(values)
    omega = np.arange(-(n // 2), n // 2)
    j = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(omega, j) / n)
    return kernel @ values


class TestForwardSpectrum:
    def test_impulse(self):
        x = np.zeros(16)
        x[0] = 1.0
        np.testing.assert_allclose(sw.forward_spectrum(x), np.ones(16), atol=1e-12)

    def test_pure_tone_bins(self):
        n = 64
        x = np.cos(2.0 * np.pi * 5.0 * np.arange(n) / n)
        spec = sw.forward_spectrum(x)
        omega = sw.spectrum_frequencies(n)
        assert abs(spec[omega == 5][0] - n / 2) < 1e-9 * n
        assert abs(spec[omega == -5][0] - n / 2) < 1e-9 * n
        rest = np.abs(spec[(omega != 5) & (omega != -5)])
        assert np.max(rest) < 1e-9 * n

    @pytest.mark.parametrize("n", [16, 64, 256])
    def test_matches_direct_sum(self, n):
        rng = np.random.default_rng(n)
        x = rng.standard_normal(n)
        diff = np.max(np.abs(sw.forward_spectrum(x) - naive_dft(x)))
        assert diff <= 1e-9 * np.linalg.norm(x)

    def test_parseval_on_random_signals(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            x = rng.standard_normal(128)
            spec = sw.forward_spectrum(x)
            lhs = np.sum(x * x)
            rhs = np.sum(np.abs(spec) ** 2) / len(x)
            assert abs(lhs - rhs) <= 1e-9 * lhs

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            sw.forward_spectrum(np.ones(48))


class TestResampleToPhase:
    def test_constant_signal(self):
        t = np.linspace(0.0, 1.0, 512)
        signal = sw.validate_signal(t, np.full(512, 3.25))
        phase = sw.exact_phase_from_samples(signal, 40.0 * np.pi * t)
        pds = sw.resample_to_phase(signal, phase, 256)
        np.testing.assert_allclose(pds.values, 3.25, atol=1e-12)
        omega = sw.spectrum_frequencies(256)
        off_dc = np.abs(pds.spectrum[omega != 0])
        assert np.max(off_dc) < 1e-9 * np.abs(pds.spectrum[omega == 0][0])

    def test_pure_tone_resampling(self):
        signal, phase = make_tone(20)
        pds = sw.resample_to_phase(signal, phase, 1024)
        omega = sw.spectrum_frequencies(1024)
        peak = np.abs(pds.spectrum[omega == 20][0])
        assert abs(peak - 512.0) <= 0.005 * 512.0
        others = np.abs(pds.spectrum[(omega != 20) & (omega != -20)])
        assert np.max(others) <= 0.01 * peak

    def test_example1_band_energy_concentration(self, example1):
        signal, _, _, phase = example1
        pds = sw.resample_to_phase(signal, phase, 4096)
        omega = sw.spectrum_frequencies(4096)
        in_band = np.zeros(len(omega), dtype=bool)
        for m in range(0, 4096 // 40 + 1):
            in_band |= np.abs(np.abs(omega) - 20 * m) <= 9
        energy = np.abs(pds.spectrum) ** 2
        assert np.sum(energy[in_band]) >= 0.99 * np.sum(energy)

    def test_grid_too_coarse(self):
        signal, phase = make_tone(20)
        with pytest.raises(sw.GridTooCoarse):
            sw.resample_to_phase(signal, phase, 64)

    def test_conjugate_symmetry_and_parseval(self, example1):
        signal, _, _, phase = example1
        pds = sw.resample_to_phase(signal, phase, 1024)
        n = pds.grid.n
        spec = pds.spectrum
        omega = sw.spectrum_frequencies(n)
        scale = np.max(np.abs(spec))
        for w in range(1, n // 2):
            lhs = spec[omega == -w][0]
            rhs = np.conj(spec[omega == w][0])
            assert abs(lhs - rhs) <= 1e-10 * scale
        lhs = np.sum(pds.values**2)
        rhs = np.sum(np.abs(spec) ** 2) / n
        assert abs(lhs - rhs) <= 1e-9 * lhs


class TestBandIndices:
    def test_dc_band_even(self):
        assert sw.band_indices(0, 20, 4096) == (-10, 9)

    def test_odd_period_count(self):
        assert sw.band_indices(3, 21, 4096) == (53, 73)

    def test_nyquist_guard(self):
        with pytest.raises(sw.BandExceedsNyquist):
            sw.band_indices(500, 20, 4096)

    def test_bands_tile_the_axis(self):
        n, l_theta, k_max = 1024, 20, 10
        covered = []
        for k in range(-k_max, k_max + 1):
            lo, hi = sw.band_indices(k, l_theta, n)
            covered.extend(range(lo, hi + 1))
        assert len(covered) == len(set(covered))
        assert sorted(covered) == list(range(min(covered), max(covered) + 1))


class TestDemodulatedBands:
    def test_single_harmonic_demodulates_to_constant(self):
        t = np.linspace(0.0, 1.0, 2048)
        l_theta = 20
        signal = sw.validate_signal(t, np.cos(2.0 * np.pi * l_theta * t))
        phase = sw.exact_phase_from_samples(signal, 2.0 * np.pi * l_theta * t)
        pds = sw.resample_to_phase(signal, phase, 1024)
        g1 = sw.extract_demodulated_band(pds, 1).values
        np.testing.assert_allclose(g1, 0.5, atol=1e-7)
        for k in (0, 2):
            gk = sw.extract_demodulated_band(pds, k).values
            assert np.max(np.abs(gk)) < 1e-6

    def test_am_tone_band_is_half_envelope(self):
        n = 1024
        l_theta = 20
        phi = np.arange(n) / n
        env = 1.0 + 0.3 * np.cos(2.0 * np.pi * phi)
        values = env * np.cos(2.0 * np.pi * l_theta * phi)
        pds = sw.PhaseDomainSignal(
            grid=sw.NormalizedPhaseGrid(n=n),
            values=values,
            spectrum=sw.forward_spectrum(values),
            l_theta=l_theta,
        )
        g1 = sw.extract_demodulated_band(pds, 1).values
        np.testing.assert_allclose(g1, env / 2.0, atol=1e-8)

    def test_complex_envelope_demodulation(self):
        # A(phi) complex and band-limited: band k returns A exactly
        n = 1024
        l_theta = 16
        k = 2
        phi = np.arange(n) / n
        a_re = 0.8 + 0.2 * np.cos(2.0 * np.pi * phi) + 0.1 * np.sin(2.0 * np.pi * 3 * phi)
        a_im = 0.3 - 0.15 * np.sin(2.0 * np.pi * 2 * phi)
        envelope = a_re + 1j * a_im
        values = 2.0 * np.real(envelope * np.exp(2j * np.pi * k * l_theta * phi))
        pds = sw.PhaseDomainSignal(
            grid=sw.NormalizedPhaseGrid(n=n),
            values=values,
            spectrum=sw.forward_spectrum(values),
            l_theta=l_theta,
        )
        gk = sw.extract_demodulated_band(pds, k).values
        np.testing.assert_allclose(gk, envelope, atol=1e-8)

    def test_band_sum_reconstructs_covered_signal(self):
        # a signal whose spectrum lies strictly inside bands 0..3 is
        # reproduced exactly by demodulating and re-modulating those bands
        n = 1024
        l_theta = 20
        k_max = 3
        rng = np.random.default_rng(8)
        phi = np.arange(n) / n
        values = np.zeros(n)
        for k in range(k_max + 1):
            envelope = np.zeros(n, dtype=complex)
            for m in range(-6, 7):
                amp = rng.standard_normal() + 1j * rng.standard_normal()
                envelope += amp * np.exp(2j * np.pi * m * phi)
            if k == 0:
                values = values + np.real(envelope)
            else:
                values = values + 2.0 * np.real(envelope * np.exp(2j * np.pi * k * l_theta * phi))
        pds = sw.PhaseDomainSignal(
            grid=sw.NormalizedPhaseGrid(n=n),
            values=values,
            spectrum=sw.forward_spectrum(values),
            l_theta=l_theta,
        )
        recon = np.real(sw.extract_demodulated_band(pds, 0).values)
        for k in range(1, k_max + 1):
            gk = sw.extract_demodulated_band(pds, k).values
            recon = recon + 2.0 * np.real(gk * np.exp(2j * np.pi * k * l_theta * phi))
        np.testing.assert_allclose(recon, values, atol=1e-9 * np.max(np.abs(values)))

    def test_band_energy_identity(self, example1):
        signal, _, _, phase = example1
        pds = sw.resample_to_phase(signal, phase, 1024)
        n, l_theta = 1024, phase.l_theta
        k_max = sw.default_band_limit(n, l_theta)
        omega = sw.spectrum_frequencies(n)
        energy = np.abs(pds.spectrum) ** 2
        total = np.sum(energy)
        in_any = np.zeros(n, dtype=bool)
        band_sum = 0.0
        for k in range(-k_max, k_max + 1):
            lo, hi = sw.band_indices(k, l_theta, n)
            mask = (omega >= lo) & (omega <= hi)
            assert not np.any(in_any & mask)
            in_any |= mask
            band_sum += np.sum(energy[mask])
        outside = np.sum(energy[~in_any])
        assert abs(band_sum + outside - total) <= 1e-9 * total


class TestInterpPhaseToTime:
    def test_constant(self, example1):
        signal, _, _, phase = example1
        out = sw.interp_phase_to_time(np.full(256, 2.5), phase, signal.times)
        np.testing.assert_allclose(out, 2.5, atol=1e-12)

    def test_linear_phase_identity(self):
        # linear phase over [0, 1]: grid values interpolated back to the time
        # grid must match the analytic function at phi(t) to spline accuracy
        def func(x):
            return np.cos(2.0 * np.pi * 3.0 * x) + 0.5 * np.sin(2.0 * np.pi * 5.0 * x)

        n = 1024
        t = np.linspace(0.0, 1.0, n)
        signal = sw.validate_signal(t, func(t))
        phase = sw.exact_phase_from_samples(signal, 2.0 * np.pi * 8.0 * t)
        grid_values = func(np.arange(n) / n)
        out = sw.interp_phase_to_time(grid_values, phase, signal.times)
        target = func(phase.normalized())
        assert np.max(np.abs(out - target)) <= 1e-7 * np.max(np.abs(target))

    def test_round_trip(self):
        n_t = 4096
        t = np.linspace(0.0, 1.0, n_t)
        theta = 40.0 * np.pi * t + 2.0 * np.cos(6.0 * np.pi * t)
        values = np.cos(theta) + 0.3 * np.cos(2.0 * theta + 0.7)
        signal = sw.validate_signal(t, values)
        phase = sw.exact_phase_from_samples(signal, theta)
        pds = sw.resample_to_phase(signal, phase, 4096)
        back = sw.interp_phase_to_time(pds.values, phase, signal.times)
        assert np.max(np.abs(back - values)) <= 1e-4 * np.max(np.abs(values))
