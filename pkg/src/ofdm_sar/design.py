"""Iterative design of zero-head OFDM pulses of arbitrary length.

The loop alternates between the oversampled time domain, where the first
``L(M-1)`` samples are zeroed and the remaining ones are amplitude-clipped,
and the frequency domain, where the out-of-band bins are removed and the
in-band weight moduli are clamped around their RMS value. After ``Q`` passes
the Nyquist-rate sequence is zero-headed and normalized, which yields a pulse
whose transmitted part ``s[M-1:]`` is only ``N - M + 1`` samples long while its
``N``-point spectrum stays close to constant modulus.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .spectral import (
    DegenerateInputError,
    as_sequence,
    dft,
    from_db,
    idft,
    oversampled_time,
    papr,
    to_db,
)


@dataclass(frozen=True)
class DesignConfig:
    """Knobs of the design loop.

    Attributes
    ----------
    n : int
        Number of subcarriers (DFT size).
    m : int
        Number of range cells in the swath; the pulse gets ``m - 1`` zero head samples.
    l : int
        Oversampling factor used for PAPR control and measurement.
    q : int
        Number of iterations.
    papr_d_db : float
        Clipping level relative to the mean power of the non-zero segment, in dB.
    g_f : float
        Relative half-width of the band the weight moduli are clamped into.
    seed : int
        Seed of the random initial phases.
    """

    n: int = 128
    m: int = 96
    l: int = 4
    q: int = 40
    papr_d_db: float = 1.0
    g_f: float = 0.05
    seed: int = 0

    def __post_init__(self):
        for name in ("n", "m", "l", "q", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ValueError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if self.n < self.m:
            raise ValueError(f"n must be >= m, got n={self.n}, m={self.m}")
        if self.l < 1:
            raise ValueError(f"l must be >= 1, got {self.l}")
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if not 0.0 < self.g_f < 1.0:
            raise ValueError(f"g_f must lie in (0, 1), got {self.g_f}")
        if not self.papr_d_db >= 0.0:
            raise ValueError(f"papr_d_db must be >= 0, got {self.papr_d_db}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")


@dataclass(frozen=True)
class PulseMetrics:
    papr_db: float
    xi_db: float
    s_min_norm: float
    oob_energy: float
    usable: bool = True

    @property
    def xi(self):
        return from_db(self.xi_db)

    @property
    def papr(self):
        return from_db(self.papr_db)


@dataclass(frozen=True, eq=False)
class OfdmPulse:
    """A designed pulse: the length-N sequence ``s`` and its weights ``S = dft(s)``."""

    n: int
    m: int
    s: np.ndarray
    weights: np.ndarray
    metrics: PulseMetrics
    config: DesignConfig | None = field(default=None)

    @property
    def transmitted(self):
        """The ``N - M + 1`` samples actually put on air."""
        return self.s[self.m - 1 :]

    @property
    def nt(self):
        return self.n - self.m + 1

    def extended(self):
        """The length ``N + M - 1`` sequence with its cyclic tail ``s_N.. = s_0..``."""
        return np.concatenate([self.s, self.s[: self.m - 1]])


def init_weights(n, seed):
    """Random constant-modulus starting weights ``exp(j 2 pi u)``, ``u ~ U[0, 1)``."""
    rng = np.random.default_rng(seed)
    phases = rng.random(n)
    return np.exp(2j * np.pi * phases)


def _head_length(x, oversampling, m, n=None):
    if n is not None and x.size != oversampling * n:
        raise ValueError(f"expected {oversampling * n} samples, got {x.size}")
    if x.size % oversampling:
        raise ValueError(f"length {x.size} is not a multiple of L={oversampling}")
    head = oversampling * (m - 1)
    if head >= x.size:
        raise ValueError(f"head of {head} samples leaves no non-zero region in {x.size}")
    return head


def time_zero_filter(x, oversampling, m, n=None):
    """Zero the first ``L(M-1)`` samples of an oversampled sequence."""
    x = as_sequence(x).copy()
    head = _head_length(x, oversampling, m, n)
    x[:head] = 0.0
    return x


def time_clip(x, oversampling, m, papr_d_db, n=None):
    """Clip the non-zero region at ``sqrt(PAPR_d * P_tav)`` keeping phases; zero the head.

    ``P_tav`` is the mean power over the ``L(N-M+1)`` samples after the head.
    """
    x = as_sequence(x).copy()
    head = _head_length(x, oversampling, m, n)
    x[:head] = 0.0
    body = x[head:]
    mag = np.abs(body)
    p_tav = np.mean(mag**2)
    if p_tav == 0.0:
        raise DegenerateInputError("non-zero region of the sequence is all zero")
    threshold = np.sqrt(from_db(papr_d_db) * p_tav)
    over = mag > threshold
    body[over] *= threshold / mag[over]
    return x


def freq_band_filter(X, n):
    """Zero bins ``n .. L*n - 1`` of an oversampled spectrum."""
    X = as_sequence(X, "X").copy()
    if X.size % n:
        raise ValueError(f"spectrum length {X.size} is not a multiple of n={n}")
    X[n:] = 0.0
    return X


def freq_modulus_clip(X, g_f):
    """Clamp each modulus into ``sqrt(P_fav) * [1 - g_f, 1 + g_f]``, keeping phases.

    ``P_fav`` is the mean power of the given bins. A bin of exactly zero
    modulus is given phase 0 and raised to the lower clamp.
    """
    X = as_sequence(X, "X").copy()
    if not 0.0 < g_f < 1.0:
        raise ValueError(f"g_f must lie in (0, 1), got {g_f}")
    mag = np.abs(X)
    rms = np.sqrt(np.mean(mag**2))
    if rms == 0.0:
        raise DegenerateInputError("all frequency bins are zero")
    lo, hi = rms * (1.0 - g_f), rms * (1.0 + g_f)
    high = mag > hi
    low = mag < lo
    zero = mag == 0.0
    X[high] *= hi / mag[high]
    low_nz = low & ~zero
    X[low_nz] *= lo / mag[low_nz]
    X[zero] = lo
    return X


def design_iteration(weights, cfg):
    """One pass of the loop: weights ``S^(q)`` (length N) to ``S^(q+1)``."""
    n, L = cfg.n, cfg.l
    x = oversampled_time(weights, L)
    x = time_zero_filter(x, L, cfg.m, n)
    x = time_clip(x, L, cfg.m, cfg.papr_d_db, n)
    X = dft(x, L * n)
    X = freq_band_filter(X, n)
    return freq_modulus_clip(X[:n], cfg.g_f)


def finalize(weights, m):
    """Zero-head and unit-energy Nyquist-rate sequence from the last iterate's weights."""
    n = len(weights)
    s = idft(weights, n)
    s[: m - 1] = 0.0
    energy = np.sum(np.abs(s[m - 1 :]) ** 2)
    if energy == 0.0:
        raise DegenerateInputError("finalized pulse has no energy after the head is removed")
    return s / np.sqrt(energy)


USABLE_S_MIN_NORM = 1e-6


def snr_degradation(weights):
    """``N^2 / sum |S_i|^-2`` for unit-energy weights; 0 if any bin vanishes."""
    S = as_sequence(weights, "weights")
    mag2 = np.abs(S) ** 2
    if np.any(mag2 == 0.0):
        return 0.0
    return float(S.size**2 / np.sum(1.0 / mag2))


def out_of_band_energy(s, m, oversampling):
    """Fraction of energy outside bins ``0..N-1`` once the oversampled waveform is time-gated."""
    s = as_sequence(s, "s")
    n = s.size
    x = oversampled_time(dft(s, n), oversampling)
    x[: oversampling * (m - 1)] = 0.0
    spectrum = np.abs(dft(x, x.size)) ** 2
    total = spectrum.sum()
    if total == 0.0:
        raise DegenerateInputError("gated waveform has no energy")
    return float(spectrum[n:].sum() / total)


def compute_metrics(s, m, oversampling):
    """PAPR of the oversampled non-zero segment, xi, normalized S_min and out-of-band energy."""
    s = as_sequence(s, "s")
    n = s.size
    S = dft(s, n)
    segment = oversampled_time(S, oversampling)[oversampling * (m - 1) :]
    xi = snr_degradation(S)
    s_min_norm = float(np.min(np.abs(S)) * np.sqrt(n))
    return PulseMetrics(
        papr_db=to_db(papr(segment)),
        # Cauchy-Schwarz caps xi at 1; clamp rounding noise above it
        xi_db=min(to_db(xi), 0.0),
        s_min_norm=s_min_norm,
        oob_energy=out_of_band_energy(s, m, oversampling),
        # same floor the OFDM reconstruction enforces by default
        usable=xi > 0.0 and s_min_norm > USABLE_S_MIN_NORM,
    )


def pulse_from_sequence(s, m, oversampling=4, config=None):
    """Wrap an existing zero-head sequence as an :class:`OfdmPulse`."""
    s = as_sequence(s, "s")
    n = s.size
    return OfdmPulse(
        n=n,
        m=m,
        s=s,
        weights=dft(s, n),
        metrics=compute_metrics(s, m, oversampling),
        config=config,
    )


def design_pulse(cfg):
    """Run the full design loop for `cfg` and return the finished pulse."""
    S = init_weights(cfg.n, cfg.seed)
    for _ in range(cfg.q):
        S = design_iteration(S, cfg)
    s = finalize(S, cfg.m)
    return pulse_from_sequence(s, cfg.m, cfg.l, config=cfg)


def search_pulse(cfg, tries, xi_min_db=-0.4):
    """Best of `tries` seeds ``cfg.seed, cfg.seed + 1, ...``.

    Keeps the pulse with the lowest PAPR among those with ``xi_db >= xi_min_db``.
    Ties go to the lowest seed.

    Raises
    ------
    ValueError
        If no seed meets the xi constraint.
    """
    if tries < 1:
        raise ValueError(f"tries must be >= 1, got {tries}")
    best = None
    for t in range(tries):
        pulse = design_pulse(replace(cfg, seed=cfg.seed + t))
        if pulse.metrics.xi_db < xi_min_db:
            continue
        if best is None or pulse.metrics.papr_db < best.metrics.papr_db:
            best = pulse
    if best is None:
        raise ValueError(f"none of {tries} seeds reached xi >= {xi_min_db} dB")
    return best
