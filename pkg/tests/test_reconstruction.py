import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ofdm_sar.design import DesignConfig, OfdmPulse, compute_metrics, design_pulse
from ofdm_sar.reconstruction import (
    UnusablePulseError,
    lfm_range_compress,
    ofdm_range_compress,
    shifted_weights,
)
from ofdm_sar.scene import (
    SwathScene,
    cluster_targets,
    lfm_sequence,
    random_scene,
    range_resolution,
    sparse_scene,
    synthesize_lfm_received,
    synthesize_received,
)
from ofdm_sar.spectral import autocorrelation, dft, idft


@pytest.fixture(scope="module")
def pulse():
    return design_pulse(DesignConfig(seed=2))


def test_exact_reconstruction(pulse):
    for seed in range(5):
        scene = random_scene(pulse.m, 1.0, seed=seed)
        est = ofdm_range_compress(synthesize_received(pulse, scene, 0.0), pulse)
        assert est.m == pulse.m
        assert np.max(np.abs(est.d_hat - scene.d)) < 1e-10
        assert np.max(np.abs(est.residual_bins)) < 1e-10


def test_impulse_scene(pulse):
    scene = sparse_scene(pulse.m, [(0, 1.0)])
    est = ofdm_range_compress(synthesize_received(pulse, scene, 0.0).u, pulse)
    expected = np.zeros(pulse.m)
    expected[0] = 1
    assert np.max(np.abs(est.d_hat - expected)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    n=st.integers(8, 64),
    frac=st.floats(0.2, 1.0),
    density=st.floats(0.0, 1.0),
)
def test_irci_free_for_any_scene(seed, n, frac, density):
    m = max(2, min(n - 1, int(frac * n)))
    p = design_pulse(DesignConfig(n=n, m=m, q=5, seed=seed % 1000))
    scene = random_scene(m, 1.0, density=density, seed=seed)
    est = ofdm_range_compress(synthesize_received(p, scene, 0.0), p)
    scale = max(1.0, np.max(np.abs(scene.d)))
    assert np.max(np.abs(est.d_hat - scene.d)) / scale < 1e-9


def test_cyclic_shift_identity(pulse):
    padded = np.concatenate([pulse.transmitted, np.zeros(pulse.m - 1)])
    Sp = shifted_weights(pulse.weights, pulse.m)
    assert np.max(np.abs(dft(padded, pulse.n) - Sp)) < 1e-12
    np.testing.assert_allclose(np.abs(Sp), np.abs(pulse.weights), rtol=1e-13)


def test_unusable_pulse_rejected():
    n, m = 16, 4
    S = np.full(n, 0.25, complex)
    S[5] = 0.0
    s = idft(S, n)
    s[: m - 1] = 0
    weights = dft(s, n)
    weights[5] = 0.0
    p = OfdmPulse(n=n, m=m, s=s, weights=weights, metrics=compute_metrics(s, m, 4))
    with pytest.raises(UnusablePulseError) as info:
        ofdm_range_compress(np.zeros(n), p)
    assert info.value.bin_index == 5
    with pytest.raises(UnusablePulseError):
        ofdm_range_compress(np.zeros(128), design_pulse(DesignConfig(seed=0)), s_min_floor=1.0)


def test_length_mismatch(pulse):
    with pytest.raises(ValueError):
        ofdm_range_compress(np.zeros(pulse.n + 1), pulse)
    with pytest.raises(ValueError):
        lfm_range_compress(np.zeros(10), lfm_sequence(5), 8)


def test_noise_power_through_chain(pulse):
    sigma_sq = 0.1
    zero = SwathScene(np.zeros(pulse.m))
    noise = np.concatenate(
        [ofdm_range_compress(synthesize_received(pulse, zero, sigma_sq, seed=s), pulse).d_hat for s in range(1100)]
    )
    assert noise.size >= 100_000
    predicted = sigma_sq / pulse.n**2 * np.sum(np.abs(pulse.weights) ** -2)
    assert abs(np.mean(np.abs(noise) ** 2) / predicted - 1.0) < 0.05


def test_lfm_impulse_gives_autocorrelation():
    m, nt = 20, 7
    l = lfm_sequence(nt)
    z = autocorrelation(l)
    target = 9
    out = lfm_range_compress(synthesize_lfm_received(l, sparse_scene(m, [(target, 1.0)]), 0.0), l, m).d_hat
    assert out[target] == pytest.approx(1.0, abs=1e-12)
    for c in range(m):
        k = target - c
        expected = z[nt - 1 - k] if abs(k) < nt else 0.0
        assert abs(out[c] - expected) < 1e-12


def test_lfm_double_sum_oracle():
    m, nt = 8, 5
    l = lfm_sequence(nt)
    scene = random_scene(m, 1.0, seed=4)
    d = scene.d
    u = synthesize_lfm_received(l, scene, 0.0)
    # the echo and the filter written as explicit sums
    echo = [sum(d[c] * l[i - c] for c in range(m) if 0 <= i - c < nt) for i in range(m + nt - 1)]
    brute = [sum(echo[c + j] * np.conj(l[j]) for j in range(nt)) for c in range(m)]
    out = lfm_range_compress(u, l, m).d_hat
    assert np.max(np.abs(out - np.array(brute))) < 1e-12
    # d_c z(0) + sum over the other cells of d_{c+k} z(-k)
    z = autocorrelation(l)
    interf = [sum(d[c + k] * z[nt - 1 - k] for k in range(-(nt - 1), nt) if 0 <= c + k < m) for c in range(m)]
    assert np.max(np.abs(out - np.array(interf))) < 1e-12


def test_lfm_linear():
    m, l = 30, lfm_sequence(9)
    a, b = random_scene(m, 1.0, seed=1), random_scene(m, 1.0, seed=2)
    f = lambda sc: lfm_range_compress(synthesize_lfm_received(l, sc, 0.0), l, m).d_hat
    assert np.max(np.abs(f(SwathScene(a.d + 3j * b.d)) - f(a) - 3j * f(b))) < 1e-12


def test_full_scale_cluster_exact():
    rho = range_resolution(150e6)
    m, n = 10_000, 10_749
    p = design_pulse(DesignConfig(n=n, m=m, q=40, seed=0))
    scene = sparse_scene(m, cluster_targets(m, start_cell=int(round(7050 / rho)), cell_size=rho))
    est = ofdm_range_compress(synthesize_received(p, scene, 0.0), p)
    assert np.max(np.abs(est.d_hat - scene.d)) < 1e-9
