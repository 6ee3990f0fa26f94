"""Range compression: per-bin equalization for OFDM, matched filtering for LFM."""

from dataclasses import dataclass

import numpy as np

from .spectral import as_sequence, dft, idft


class UnusablePulseError(ValueError):
    """The pulse has a subcarrier weight too small to divide by."""

    def __init__(self, bin_index, modulus, floor):
        self.bin_index = bin_index
        self.modulus = modulus
        self.floor = floor
        super().__init__(
            f"|S_{bin_index}| = {modulus:.3e} is not above the floor {floor:.3e}; "
            "equalizing it would amplify noise without bound"
        )


@dataclass(frozen=True, eq=False)
class RangeEstimate:
    d_hat: np.ndarray
    residual_bins: np.ndarray

    @property
    def m(self):
        return self.d_hat.size


def shifted_weights(weights, m):
    """Spectrum of the pulse cyclically shifted to start at its first non-zero sample."""
    S = as_sequence(weights, "weights")
    i = np.arange(S.size)
    return S * np.exp(2j * np.pi * i * (m - 1) / S.size)


def ofdm_range_compress(received, pulse, s_min_floor=None):
    """IRCI-free estimate of the scene from one received OFDM range line.

    FFT the ``N`` received samples, divide bin-wise by the shifted pulse
    spectrum and inverse FFT; the first ``M`` outputs are ``sqrt(N) d_m`` plus
    noise. The ``sqrt(N)`` is removed here, so ``d_hat`` estimates ``d_m``
    directly and ``residual_bins`` (the last ``N - M`` outputs, same scaling)
    hold noise only.

    Parameters
    ----------
    received : ReceivedSignal or array_like
        The ``N`` samples ``u_0 .. u_{N-1}``.
    pulse : OfdmPulse
    s_min_floor : float, optional
        Smallest acceptable ``|S_i|``; defaults to ``1e-6 / sqrt(N)``.

    Raises
    ------
    UnusablePulseError
        If some ``|S_i| <= s_min_floor``.
    """
    u = as_sequence(getattr(received, "u", received), "received")
    n, m = pulse.n, pulse.m
    if u.size != n:
        raise ValueError(f"received line has {u.size} samples, pulse expects {n}")
    if s_min_floor is None:
        s_min_floor = 1e-6 / np.sqrt(n)
    mag = np.abs(pulse.weights)
    worst = int(np.argmin(mag))
    if mag[worst] <= s_min_floor:
        raise UnusablePulseError(worst, float(mag[worst]), float(s_min_floor))
    D_hat = dft(u, n) / shifted_weights(pulse.weights, m)
    gamma = idft(D_hat, n) / np.sqrt(n)
    return RangeEstimate(d_hat=gamma[:m], residual_bins=gamma[m:])


def lfm_range_compress(received, chirp, m):
    """Matched-filter the linear-convolution echo with `chirp`.

    Output cell ``m`` is ``sum_n u[n + m] conj(l[n])``, which for a noiseless echo
    equals ``d_m z(0) + sum_{k != 0} d_{m+k} z(-k)`` with ``z`` from
    :func:`ofdm_sar.spectral.autocorrelation`.
    """
    u = as_sequence(received, "received")
    l = as_sequence(chirp, "chirp")
    nt = l.size
    if u.size != m + nt - 1:
        raise ValueError(f"echo has {u.size} samples, expected M + Nt - 1 = {m + nt - 1}")
    # correlate(u, l, 'valid')[k] = sum_n u[n + k] conj(l[n])
    out = np.correlate(u, l, mode="valid")
    return RangeEstimate(d_hat=out, residual_bins=np.zeros(0, dtype=np.complex128))
