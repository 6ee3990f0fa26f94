"""Unitary DFT pair, oversampled OFDM synthesis, PAPR and aperiodic autocorrelation.

Sequences are plain 1-D ``complex128`` numpy arrays. Whether an array holds
time samples or subcarrier weights is carried by the function that consumes
it, not by a wrapper type.
"""

import numpy as np


class DegenerateInputError(ValueError):
    """Raised when an input makes a quantity undefined (e.g. an all-zero power normalizer)."""


def as_sequence(x, name="x"):
    """Return `x` as a finite, non-empty 1-D complex array."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must contain at least one sample")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite samples")
    return arr


def _check_size(x, size, name):
    if int(size) != size or size < 1:
        raise ValueError(f"size must be a positive integer, got {size!r}")
    if x.size != size:
        raise ValueError(f"{name} has {x.size} samples, expected {size}")


def dft(x, size):
    """Unitary forward DFT, ``X_i = N^-1/2 sum_n x_n exp(-j 2 pi i n / N)``."""
    x = as_sequence(x)
    _check_size(x, size, "x")
    return np.fft.fft(x, norm="ortho")


def idft(X, size):
    """Unitary inverse DFT; exact inverse of :func:`dft`."""
    X = as_sequence(X, "X")
    _check_size(X, size, "X")
    return np.fft.ifft(X, norm="ortho")


def dft_reference(x):
    """O(N^2) matrix form of :func:`dft`, kept as a slow reference path."""
    x = as_sequence(x)
    n = x.size
    k = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return kernel @ x / np.sqrt(n)


def idft_reference(X):
    """O(N^2) matrix form of :func:`idft`."""
    X = as_sequence(X, "X")
    n = X.size
    k = np.arange(n)
    kernel = np.exp(2j * np.pi * np.outer(k, k) / n)
    return kernel @ X / np.sqrt(n)


def oversampled_time(weights, oversampling):
    """Sample the OFDM waveform of `weights` at `oversampling` times the Nyquist rate.

    Returns the ``L*N`` samples
    ``s~_n = (LN)^-1/2 sum_{i<N} S_i exp(j 2 pi n i / (LN))``, i.e. the unitary
    ``L*N``-point inverse DFT of the weights zero-padded at the top.
    """
    S = as_sequence(weights, "weights")
    if int(oversampling) != oversampling or oversampling < 1:
        raise ValueError(f"oversampling must be a positive integer, got {oversampling!r}")
    L = int(oversampling)
    if L == 1:
        return np.fft.ifft(S, norm="ortho")
    padded = np.zeros(L * S.size, dtype=np.complex128)
    padded[: S.size] = S
    return np.fft.ifft(padded, norm="ortho")


def papr(x):
    """Peak-to-average power ratio of `x` as a linear ratio (>= 1)."""
    x = as_sequence(x)
    power = np.abs(x) ** 2
    mean = power.mean()
    if mean == 0.0:
        raise DegenerateInputError("PAPR undefined for an all-zero sequence")
    return float(power.max() / mean)


def to_db(ratio):
    """Linear power ratio to decibels; zero maps to -inf."""
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(ratio)
    return float(out) if np.ndim(out) == 0 else out


def from_db(value_db):
    """Decibels to linear power ratio."""
    out = 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)
    return float(out) if np.ndim(out) == 0 else out


def papr_db(x):
    return to_db(papr(x))


def autocorrelation(seq):
    """Aperiodic autocorrelation ``z(k) = sum_n l(n) conj(l(n-k))``.

    Returns an array of length ``2*Nt - 1``; entry ``k + Nt - 1`` holds lag
    ``k`` for ``k = -(Nt-1) .. Nt-1``. Use :func:`lags` for the lag axis.
    """
    l = as_sequence(seq, "seq")
    z = np.convolve(l, np.conj(l[::-1]))
    # enforce z(-k) == conj(z(k)) bit-for-bit; convolve's summation order differs per lag
    nt = l.size
    z[: nt - 1] = np.conj(z[nt:][::-1])
    return z


def lags(length):
    """Lag axis matching :func:`autocorrelation` for a sequence of `length` samples."""
    return np.arange(-(length - 1), length)
