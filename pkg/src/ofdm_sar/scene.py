"""Range-line scenes and the sampled echoes they produce.

A scene is the vector of complex RCS coefficients ``d_0 .. d_{M-1}`` of one
range line (carrier/azimuth phase already folded in). For a zero-head OFDM
pulse the ``N`` samples kept at the receiver are

    u_n = sum_m d_m s_{n-m+M-1} + w_n,   n = 0 .. N-1,

which is a circular convolution because the extended pulse has an all-zero
cyclic tail. The LFM baseline instead sees the plain linear convolution.
"""

from dataclasses import dataclass

import numpy as np

from .spectral import as_sequence

SPEED_OF_LIGHT = 299_792_458.0

# relative layout of the seven-target range-line experiment, meters from the first target
CLUSTER_OFFSETS_M = (0.0, 6.0, 13.0, 19.0, 23.0, 36.0, 50.0)
CLUSTER_AMPLITUDES = (0.9, 1.0, 0.04, 0.75, 0.035, 0.6, 0.85)


@dataclass(frozen=True, eq=False)
class SwathScene:
    d: np.ndarray
    sigma_d_sq: float | None = None

    def __post_init__(self):
        d = np.asarray(self.d, dtype=np.complex128)
        if d.ndim != 1 or d.size < 2:
            raise ValueError(f"a scene needs at least 2 range cells, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise ValueError("scene coefficients must be finite")
        object.__setattr__(self, "d", d)

    @property
    def m(self):
        return self.d.size


@dataclass(frozen=True, eq=False)
class ReceivedSignal:
    u: np.ndarray
    sigma_sq: float
    seed: int | None = None

    @property
    def n(self):
        return self.u.size


@dataclass(frozen=True)
class TimingReport:
    pulse_duration: float
    min_range: float
    max_prf: float


def random_scene(m, sigma_d_sq, density=1.0, seed=0):
    """Scene with ``round(density * m)`` cells drawn i.i.d. from ``CN(0, sigma_d_sq)``."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if sigma_d_sq <= 0:
        raise ValueError(f"sigma_d_sq must be positive, got {sigma_d_sq}")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    d = np.zeros(m, dtype=np.complex128)
    k = int(round(density * m))
    if k == m:
        cells = np.arange(m)
    else:
        cells = np.sort(rng.choice(m, size=k, replace=False))
    d[cells] = complex_normal(rng, k, sigma_d_sq)
    return SwathScene(d, sigma_d_sq)


def sparse_scene(m, targets):
    """Scene that is zero except for the listed ``(cell, amplitude)`` pairs."""
    d = np.zeros(m, dtype=np.complex128)
    seen = set()
    for cell, amplitude in targets:
        if int(cell) != cell or not 0 <= cell < m:
            raise ValueError(f"target cell {cell!r} outside 0..{m - 1}")
        if cell in seen:
            raise ValueError(f"duplicate target cell {cell}")
        seen.add(cell)
        d[int(cell)] = amplitude
    return SwathScene(d)


def cluster_targets(m, start_cell=None, cell_size=1.0):
    """The seven-target cluster used for range-line imaging, as ``(cell, amplitude)`` pairs.

    Targets are spaced by :data:`CLUSTER_OFFSETS_M` meters with cells of
    `cell_size` meters. Without `start_cell` the cluster starts at 70.5 % of
    the swath, moved left (and compressed if the swath is shorter than the
    cluster) so that it fits.
    """
    span = CLUSTER_OFFSETS_M[-1]
    if start_cell is None:
        cell_size = max(cell_size, span / (m - 1))
        start_cell = min(int(round(0.705 * m)), m - 1 - int(round(span / cell_size)))
    cells = [start_cell + int(round(off / cell_size)) for off in CLUSTER_OFFSETS_M]
    if cells[-1] >= m or start_cell < 0:
        raise ValueError(f"target cluster does not fit in {m} cells from cell {start_cell}")
    if len(set(cells)) < len(cells):
        raise ValueError(f"{m} cells are too few to separate the seven targets")
    return list(zip(cells, CLUSTER_AMPLITUDES))


def complex_normal(rng, size, variance):
    """Circular complex Gaussian draws with total variance `variance`."""
    scale = np.sqrt(variance / 2.0)
    parts = rng.standard_normal((2, size))
    return scale * (parts[0] + 1j * parts[1])


def noiseless_echo(s, d):
    """The ``N`` kept samples of the echo of zero-head sequence `s` off scene `d`."""
    s = as_sequence(s, "s")
    d = as_sequence(d, "d")
    n, m = s.size, d.size
    if m > n:
        raise ValueError(f"scene has {m} cells but the pulse only {n} samples")
    extended = np.concatenate([s, s[: m - 1]])
    full = np.convolve(d, extended)
    return full[m - 1 : m - 1 + n]


def synthesize_received(pulse, scene, sigma_sq, seed=0):
    """Received OFDM samples for `scene`, with ``CN(0, sigma_sq)`` noise."""
    s, m = pulse.s, pulse.m
    if scene.m != m:
        raise ValueError(f"pulse designed for M={m} but scene has {scene.m} cells")
    if sigma_sq < 0:
        raise ValueError(f"sigma_sq must be >= 0, got {sigma_sq}")
    u = noiseless_echo(s, scene.d)
    if sigma_sq > 0:
        rng = np.random.default_rng(seed)
        u = u + complex_normal(rng, u.size, sigma_sq)
    return ReceivedSignal(u, float(sigma_sq), seed)


def channel_matrix(scene, n):
    """Banded Toeplitz matrix ``H`` (``n`` by ``n - M + 1``) with ``u = H s_t``."""
    d = scene.d if isinstance(scene, SwathScene) else as_sequence(scene, "scene")
    m = d.size
    if n < m:
        raise ValueError(f"n must be >= M, got n={n}, M={m}")
    cols = n - m + 1
    H = np.zeros((n, cols), dtype=np.complex128)
    for j in range(cols):
        H[j : j + m, j] = d
    return H


def lfm_sequence(nt):
    """Unit-energy chirp of `nt` samples sweeping the full sampled band.

    ``l(n) = nt^-1/2 exp(j pi (n - nt/2)^2 / nt)``, i.e. a chirp rate of
    ``B / T_p`` with ``B = 1/T_s`` and ``T_p = nt * T_s``, centered on the pulse.
    """
    if nt < 2:
        raise ValueError(f"nt must be >= 2, got {nt}")
    n = np.arange(nt)
    return np.exp(1j * np.pi * (n - nt / 2.0) ** 2 / nt) / np.sqrt(nt)


def synthesize_lfm_received(l, scene, sigma_sq, seed=0):
    """Linear-convolution echo of chirp `l` off `scene` (``M + Nt - 1`` samples) plus noise."""
    l = as_sequence(l, "l")
    if sigma_sq < 0:
        raise ValueError(f"sigma_sq must be >= 0, got {sigma_sq}")
    u = np.convolve(scene.d, l)
    if sigma_sq > 0:
        rng = np.random.default_rng(seed)
        u = u + complex_normal(rng, u.size, sigma_sq)
    return u


def range_resolution(bandwidth):
    return SPEED_OF_LIGHT / (2.0 * bandwidth)


def timing_constraints(n, m, sample_rate, swath_width):
    """Pulse duration, minimum unambiguous range and maximum PRF of an ``N``/``M`` design."""
    if m < 2 or n <= m:
        raise ValueError(f"need n > m >= 2, got n={n}, m={m}")
    if sample_rate <= 0:
        raise ValueError(f"sample_rate must be positive, got {sample_rate}")
    if swath_width < 0:
        raise ValueError(f"swath_width must be >= 0, got {swath_width}")
    duration = (n - m + 1) / sample_rate
    return TimingReport(
        pulse_duration=duration,
        min_range=SPEED_OF_LIGHT * duration / 2.0,
        max_prf=1.0 / (2.0 * swath_width / SPEED_OF_LIGHT + duration),
    )
