"""SNR/SINR after range compression, design Monte Carlo and the SINR sweep.

All power ratios are linear unless the name ends in ``_db``.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .design import design_pulse, snr_degradation
from .spectral import DegenerateInputError, as_sequence, autocorrelation, from_db, to_db

# threshold grids of the design-quality tables
PAPR_LIMITS_DB = (2.0, 2.5, 3.0)
XI_LIMITS_DB = (-0.1, -0.2, -0.4)
S_MIN_LIMITS = (0.88, 0.85, 0.8, 0.5)


def _inverse_power_sum(weights):
    S = as_sequence(weights, "weights")
    mag2 = np.abs(S) ** 2
    if np.any(mag2 == 0.0):
        raise DegenerateInputError("a subcarrier weight is zero; SNR after equalization is zero")
    return S.size, float(np.sum(1.0 / mag2))


def snr_after_compression(d_power, sigma_sq, weights):
    """``N^2 |d_m|^2 / (sigma^2 sum_i |S_i|^-2)`` for unit-energy weights."""
    if sigma_sq <= 0:
        raise ValueError(f"sigma_sq must be positive, got {sigma_sq}")
    n, inv = _inverse_power_sum(weights)
    return n * n * d_power / (sigma_sq * inv)


def ofdm_noise_variance(weights, sigma_sq):
    """Variance of the noise on ``d_hat`` (already divided by sqrt(N))."""
    n, inv = _inverse_power_sum(weights)
    return sigma_sq * inv / (n * n)


def ofdm_sinr_bound(s_min, n, sigma_d_sq, sigma_sq):
    """Lower bound ``N S_min^2 sigma_d^2 / sigma^2``, independent of the swath size."""
    if s_min <= 0:
        raise ValueError(f"s_min must be positive, got {s_min}")
    return n * s_min**2 * sigma_d_sq / sigma_sq


def ofdm_true_sinr(weights, sigma_d_sq, sigma_sq):
    """Mean SNR over cells, ``xi * sigma_d^2 / sigma^2``."""
    return snr_after_compression(sigma_d_sq, sigma_sq, weights)


def lag_window(m, n_cells, nt):
    """Lags ``k`` (as a range) whose cell ``m + k`` lies inside the swath and within the pulse."""
    return range(max(-m, -(nt - 1)), min(n_cells - m - 1, nt - 1) + 1)


def _split_z(z):
    z = as_sequence(z, "z")
    if z.size % 2 == 0:
        raise ValueError(f"autocorrelation must have odd length 2*Nt-1, got {z.size}")
    return z, (z.size + 1) // 2


def lfm_mean_interference(sigma_d_sq, z, m, n_cells):
    """Expected sidelobe power ``sigma_d^2 sum_{k != 0} |z(k)|^2`` at cell `m`."""
    z, nt = _split_z(z)
    if not 0 <= m < n_cells:
        raise ValueError(f"cell {m} outside 0..{n_cells - 1}")
    power = np.abs(z) ** 2
    ks = np.array([k for k in lag_window(m, n_cells, nt) if k != 0], dtype=int)
    return float(sigma_d_sq * power[ks + nt - 1].sum()) if ks.size else 0.0


def swath_interference(sigma_d_sq, z, n_cells, aggregate="interior"):
    """One interference power for the whole swath.

    ``aggregate`` selects how the cell-dependent lag window is handled:
    ``"interior"`` uses the full window ``0 < |k| < Nt`` of a cell far from
    the swath edges, ``"mean"`` averages the per-cell value over all cells,
    and an integer picks that cell.
    """
    z, nt = _split_z(z)
    if aggregate == "interior":
        power = np.abs(z) ** 2
        # lags that fit in the swath at all
        reach = min(nt - 1, n_cells - 1)
        sel = np.r_[nt - 1 - reach : nt - 1, nt : nt + reach]
        return float(sigma_d_sq * power[sel].sum())
    if aggregate == "mean":
        return float(np.mean([lfm_mean_interference(sigma_d_sq, z, m, n_cells) for m in range(n_cells)]))
    if isinstance(aggregate, (int, np.integer)) and not isinstance(aggregate, bool):
        return lfm_mean_interference(sigma_d_sq, z, int(aggregate), n_cells)
    raise ValueError(f"unknown aggregate {aggregate!r}")


def lfm_mean_sinr(sigma_d_sq, sigma_sq, z, n_cells, aggregate="interior"):
    """``sigma_d^2 / (E|I|^2 + sigma^2)`` for the matched-filtered chirp."""
    return sigma_d_sq / (swath_interference(sigma_d_sq, z, n_cells, aggregate) + sigma_sq)


def lfm_interference(d, z):
    """Realized sidelobe term of every cell after matched filtering.

    ``I_m = sum_{k != 0} d_{m+k} z(-k)`` over the lags that stay inside the
    swath, which is exactly what :func:`ofdm_sar.reconstruction.lfm_range_compress`
    adds to ``d_m z(0)``.
    """
    d = as_sequence(d, "d")
    z, nt = _split_z(z)
    m_cells = d.size
    out = np.zeros(m_cells, dtype=np.complex128)
    for k in range(-(nt - 1), nt):
        if k == 0:
            continue
        lo, hi = max(0, -k), min(m_cells, m_cells - k)
        if lo >= hi:
            continue
        out[lo:hi] += d[lo + k : hi + k] * z[nt - 1 - k]
    return out


def realized_sinr_per_cell(scene, z, sigma_sq):
    """Per-cell ``|d_m|^2 / (|I_m|^2 + sigma^2)`` for the chirp baseline."""
    d = getattr(scene, "d", scene)
    interference = lfm_interference(d, z)
    d = np.asarray(d)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.abs(d) ** 2 / (np.abs(interference) ** 2 + sigma_sq)


def ofdm_sinr_per_cell(scene, weights, sigma_sq):
    """Per-cell SNR after OFDM range compression (there is no interference term)."""
    d = np.asarray(getattr(scene, "d", scene))
    return np.abs(d) ** 2 / ofdm_noise_variance(weights, sigma_sq)


@dataclass(frozen=True)
class DesignTrialRecord:
    seed: int
    papr_db: float
    xi_db: float
    s_min_norm: float
    usable: bool = True


@dataclass(frozen=True)
class ThresholdCount:
    table: str
    count: int
    fraction: float
    papr_max_db: float | None = None
    xi_min_db: float | None = None
    s_min_norm: float | None = None


@dataclass(frozen=True, eq=False)
class MonteCarloSummary:
    trials: int
    papr_cdf: tuple
    xi_cdf: tuple
    s_min_cdf: tuple
    thresholds: list = field(default_factory=list)
    unusable: int = 0

    def count(self, papr_max_db=None, xi_min_db=None, s_min_norm=None):
        for row in self.thresholds:
            if (row.papr_max_db, row.xi_min_db, row.s_min_norm) == (papr_max_db, xi_min_db, s_min_norm):
                return row.count
        raise KeyError((papr_max_db, xi_min_db, s_min_norm))


def empirical_cdf(values):
    """Sorted values and the step-CDF heights ``i / n`` reached at each of them."""
    x = np.sort(np.asarray(values, dtype=float))
    return x, np.arange(1, x.size + 1) / x.size


def _run_trial(cfg):
    metrics = design_pulse(cfg).metrics
    return DesignTrialRecord(
        seed=cfg.seed,
        papr_db=metrics.papr_db,
        xi_db=metrics.xi_db,
        s_min_norm=metrics.s_min_norm,
        usable=metrics.usable,
    )


def _run_chunk(cfgs):
    return [_run_trial(cfg) for cfg in cfgs]


def run_design_trials(cfg, trials, base_seed=0, workers=None):
    """Design one pulse per seed ``base_seed + t`` and return the records sorted by seed."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    cfgs = [replace(cfg, seed=base_seed + t) for t in range(trials)]
    if not workers or workers == 1 or trials < 2:
        return _run_chunk(cfgs)
    step = -(-trials // (4 * workers))
    chunks = [cfgs[i : i + step] for i in range(0, trials, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        records = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
    return sorted(records, key=lambda r: r.seed)


def summarize_trials(records):
    """CDFs and the PAPR x xi and S_min threshold counts of a list of trial records."""
    papr = np.array([r.papr_db for r in records])
    xi = np.array([r.xi_db for r in records])
    smin = np.array([r.s_min_norm for r in records])
    total = len(records)
    rows = []
    for p in PAPR_LIMITS_DB:
        for x in XI_LIMITS_DB:
            c = int(np.count_nonzero((papr <= p) & (xi >= x)))
            rows.append(ThresholdCount("papr_xi", c, c / total, papr_max_db=p, xi_min_db=x))
    for s in S_MIN_LIMITS:
        c = int(np.count_nonzero(smin >= s))
        rows.append(ThresholdCount("s_min", c, c / total, s_min_norm=s))
    return MonteCarloSummary(
        trials=total,
        papr_cdf=empirical_cdf(papr),
        xi_cdf=empirical_cdf(xi),
        s_min_cdf=empirical_cdf(smin),
        thresholds=rows,
        unusable=sum(not r.usable for r in records),
    )


def monte_carlo_designs(cfg, trials, base_seed=0, workers=None):
    """Run `trials` independent designs and summarize them.

    Returns
    -------
    records : list of DesignTrialRecord
    summary : MonteCarloSummary
    """
    records = run_design_trials(cfg, trials, base_seed, workers)
    return records, summarize_trials(records)


@dataclass(frozen=True, eq=False)
class SinrCurve:
    snr_in_db: np.ndarray
    lfm_sinr_db: np.ndarray
    ofdm_bound_db: np.ndarray
    ofdm_true_db: np.ndarray

    def __post_init__(self):
        sizes = {len(self.snr_in_db), len(self.lfm_sinr_db), len(self.ofdm_bound_db), len(self.ofdm_true_db)}
        if len(sizes) != 1:
            raise ValueError("all curves must share the input-SNR grid")
        if np.any(np.diff(self.snr_in_db) <= 0):
            raise ValueError("input-SNR grid must be strictly increasing")


def sinr_sweep(snr_in_db, chirp, n_cells, *, weights=None, s_min_norm=None, aggregate="interior"):
    """Mean SINR of chirp and OFDM range compression over a grid of ``sigma_d^2/sigma^2``.

    The noise power is fixed to 1 and ``sigma_d^2`` follows the grid. The
    OFDM bound uses ``s_min_norm`` (``S_min`` in units of ``1/sqrt(N)``),
    falling back to the measured minimum of `weights`; the true OFDM curve
    needs `weights` and is NaN without them.
    """
    grid = np.atleast_1d(np.asarray(snr_in_db, dtype=float))
    if grid.size == 0:
        raise ValueError("empty input-SNR grid")
    if s_min_norm is None:
        if weights is None:
            raise ValueError("need weights or s_min_norm")
        S = as_sequence(weights, "weights")
        s_min_norm = float(np.min(np.abs(S)) * np.sqrt(S.size))
    z = autocorrelation(chirp)
    ratio = from_db(grid)
    lfm = np.array([lfm_mean_sinr(r, 1.0, z, n_cells, aggregate) for r in ratio])
    # N * S_min^2 = s_min_norm^2 whatever N is
    bound = s_min_norm**2 * ratio
    if weights is not None:
        true = snr_degradation(weights) * ratio
    else:
        true = np.full_like(ratio, np.nan)
    return SinrCurve(grid, to_db(lfm), to_db(bound), to_db(true))


def crossing_point(curve):
    """Input SNR (dB) where the OFDM bound first rises above the chirp curve.

    Linear interpolation between the bracketing grid points; ``None`` if the
    bound never crosses from below.
    """
    gap = np.asarray(curve.ofdm_bound_db) - np.asarray(curve.lfm_sinr_db)
    x = np.asarray(curve.snr_in_db)
    for i in range(1, gap.size):
        if gap[i - 1] <= 0.0 < gap[i]:
            t = -gap[i - 1] / (gap[i] - gap[i - 1])
            return float(x[i - 1] + t * (x[i] - x[i - 1]))
    return None
