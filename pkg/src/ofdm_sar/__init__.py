"""Zero-head OFDM radar pulses of arbitrary length and IRCI-free range reconstruction."""

__version__ = "0.1.0"

from .analysis import (
    DesignTrialRecord,
    MonteCarloSummary,
    SinrCurve,
    crossing_point,
    empirical_cdf,
    lfm_interference,
    lfm_mean_interference,
    lfm_mean_sinr,
    monte_carlo_designs,
    ofdm_noise_variance,
    ofdm_sinr_bound,
    ofdm_sinr_per_cell,
    ofdm_true_sinr,
    realized_sinr_per_cell,
    sinr_sweep,
    snr_after_compression,
    swath_interference,
)
from .design import (
    DesignConfig,
    OfdmPulse,
    PulseMetrics,
    compute_metrics,
    design_pulse,
    freq_band_filter,
    freq_modulus_clip,
    init_weights,
    pulse_from_sequence,
    search_pulse,
    snr_degradation,
    time_clip,
    time_zero_filter,
)
from .reconstruction import RangeEstimate, UnusablePulseError, lfm_range_compress, ofdm_range_compress
from .scene import (
    ReceivedSignal,
    SwathScene,
    channel_matrix,
    cluster_targets,
    lfm_sequence,
    random_scene,
    sparse_scene,
    synthesize_lfm_received,
    synthesize_received,
    timing_constraints,
)
from .spectral import (
    DegenerateInputError,
    autocorrelation,
    dft,
    from_db,
    idft,
    oversampled_time,
    papr,
    papr_db,
    to_db,
)
