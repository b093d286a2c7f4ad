"""Phase-space resampling, discrete spectrum and harmonic band splitting.

A signal with phase ``theta`` is resampled onto the uniform normalized-phase
grid ``phi_j = j/n`` where ``phi = (theta - theta[0]) / (theta[-1] - theta[0])``.
On that grid the oscillation is exactly periodic with ``l_theta`` cycles per
record, so its spectrum concentrates near integer multiples of ``l_theta``.
Each harmonic band ``k`` is then shifted down to baseband, where it exposes
the envelope scaled by the k-th shape coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .core import NormalizedPhaseGrid, PhaseFunction, Signal
from .errors import BandExceedsNyquist, GridTooCoarse


@dataclass(frozen=True)
class PhaseDomainSignal:
    """Signal resampled to the uniform phase grid, plus its spectrum.

    ``spectrum[i]`` is the coefficient of ``exp(2j*pi*omega*phi)`` for
    ``omega = i - n/2``, i.e. frequencies run over -n/2 .. n/2-1.
    """

    grid: NormalizedPhaseGrid
    values: np.ndarray
    spectrum: np.ndarray
    l_theta: int


@dataclass(frozen=True)
class DemodulatedBand:
    """Harmonic band ``k`` shifted to baseband; a slow complex signal."""

    k: int
    values: np.ndarray


def spectrum_frequencies(n: int) -> np.ndarray:
    """Frequency index of each spectrum entry: -n/2 .. n/2-1."""
    return np.arange(-(n // 2), n // 2)


def forward_spectrum(values) -> np.ndarray:
    """Discrete spectrum ``sum_j values[j] * exp(-2j*pi*omega*j/n)``.

    Returned in increasing frequency order, omega = -n/2 .. n/2-1.
    """
    values = np.asarray(values)
    n = len(values)
    if n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    return np.fft.fftshift(np.fft.fft(values))


def inverse_from_shifted(spectrum_fftshift: np.ndarray) -> np.ndarray:
    """Inverse of :func:`forward_spectrum` (includes the 1/n factor)."""
    return np.fft.ifft(np.fft.ifftshift(spectrum_fftshift))


def default_grid_size(n_samples: int, l_theta: int) -> int:
    """Smallest power of two >= max(n_samples, 8 * l_theta)."""
    return 1 << int(max(n_samples, 8 * l_theta) - 1).bit_length()


def resample_to_phase(signal: Signal, phase: PhaseFunction, n: int | None = None) -> PhaseDomainSignal:
    """Resample a signal onto the uniform normalized-phase grid.

    A natural cubic spline through ``(phi(t_l), f(t_l))`` is evaluated at
    ``phi_j = j/n``.  The grid must be a power of two with ``n >= 4*l_theta``
    so every harmonic band up to the first is resolvable.

    Raises
    ------
    GridTooCoarse
        If ``n < 4 * l_theta``.
    """
    if n is None:
        n = default_grid_size(signal.n_samples, phase.l_theta)
    if n & (n - 1):
        raise ValueError(f"grid size must be a power of two, got {n}")
    if n < 4 * phase.l_theta:
        raise GridTooCoarse(f"grid size {n} < 4 * l_theta = {4 * phase.l_theta}")
    phi = phase.normalized()
    spline = CubicSpline(phi, signal.values, bc_type="natural")
    grid = NormalizedPhaseGrid(n=n)
    values = spline(grid.nodes)
    return PhaseDomainSignal(
        grid=grid,
        values=values,
        spectrum=forward_spectrum(values),
        l_theta=phase.l_theta,
    )


def band_indices(k: int, l_theta: int, n: int) -> tuple[int, int]:
    """Inclusive frequency interval of harmonic band ``k``.

    Band k covers ``k*l_theta - floor(l_theta/2) .. k*l_theta + ceil(l_theta/2) - 1``,
    i.e. a width-``l_theta`` interval centered on the k-th multiple of the
    fundamental.  For every integer k these intervals tile the frequency axis.

    Raises
    ------
    BandExceedsNyquist
        If the band does not fit below the Nyquist frequency n/2.
    """
    half_lo = l_theta // 2
    half_hi = (l_theta + 1) // 2
    lo = k * l_theta - half_lo
    hi = k * l_theta + half_hi - 1
    if abs(k) * l_theta + half_hi > n // 2:
        raise BandExceedsNyquist(
            f"band {k} needs frequencies up to {abs(k) * l_theta + half_hi}, "
            f"grid Nyquist is {n // 2}; lower the band limit or raise the grid size"
        )
    return lo, hi


def extract_demodulated_band(pds: PhaseDomainSignal, k: int,
                             trim_unpaired: bool = False) -> DemodulatedBand:
    """Isolate harmonic band ``k`` and shift it down to baseband.

    Returns ``g_k(phi_j) = (1/n) * sum_{omega in band k} spectrum(omega)
    * exp(2j*pi*(omega - k*l_theta)*j/n)``.  For a signal matching the model,
    ``g_k`` approximates the envelope times the k-th shape coefficient.

    For even ``l_theta`` the band's lowest bin has no conjugate partner
    inside the band; ``trim_unpaired=True`` zeroes it.  The model constrains
    the envelope spectrum to vanish at exactly that offset, so the fitting
    path discards it, while the default keeps the band's exact tiling of the
    frequency axis.
    """
    n = pds.grid.n
    lo, hi = band_indices(k, pds.l_theta, n)
    if trim_unpaired and pds.l_theta % 2 == 0:
        lo += 1
    omega = spectrum_frequencies(n)
    mask = (omega >= lo) & (omega <= hi)
    buf = np.zeros(n, dtype=complex)
    buf[(omega[mask] - k * pds.l_theta) % n] = pds.spectrum[mask]
    return DemodulatedBand(k=k, values=np.fft.ifft(buf))


def interp_phase_to_time(values_phase, phase: PhaseFunction, times) -> np.ndarray:
    """Interpolate phase-grid samples back onto the original time grid.

    The phase grid is closed periodically at phi = 1 (every quantity carried
    on it is one record-period of a periodic function), then a natural cubic
    spline is evaluated at ``phi(t_l)``.
    """
    values_phase = np.asarray(values_phase, dtype=float)
    times = np.asarray(times, dtype=float)
    if times.shape != phase.phases.shape:
        raise ValueError("times must be the grid the phase function is aligned with")
    n = len(values_phase)
    nodes = np.arange(n + 1) / n
    spline = CubicSpline(nodes, np.append(values_phase, values_phase[0]), bc_type="natural")
    phi = (phase.phases - phase.phases[0]) / phase.span
    return spline(phi)
