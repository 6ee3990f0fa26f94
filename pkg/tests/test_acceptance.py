"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line in the run summary."""

import cmath
import time

import numpy as np
import pytest
from conftest import record_criterion

from ofdm_sar.analysis import crossing_point, monte_carlo_designs, sinr_sweep
from ofdm_sar.cli import main
from ofdm_sar.design import DesignConfig, design_pulse
from ofdm_sar.reconstruction import lfm_range_compress, ofdm_range_compress
from ofdm_sar.scene import (
    SwathScene,
    channel_matrix,
    cluster_targets,
    lfm_sequence,
    random_scene,
    sparse_scene,
    synthesize_lfm_received,
    synthesize_received,
)
from ofdm_sar.spectral import dft, dft_reference, idft, idft_reference, oversampled_time

pytestmark = pytest.mark.acceptance


def test_c1_irci_free_exactness():
    start = time.perf_counter()
    worst = 0.0
    for n in (32, 128, 1024):
        m = 3 * n // 4
        for t in range(100):
            pulse = design_pulse(DesignConfig(n=n, m=m, seed=1000 * n + t))
            scene = random_scene(m, 1.0, seed=7 * n + t)
            est = ofdm_range_compress(synthesize_received(pulse, scene, 0.0), pulse)
            err = np.linalg.norm(est.d_hat - scene.d) / np.linalg.norm(scene.d)
            worst = max(worst, err)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 10.0
    record_criterion(1, "IRCI-free exactness", ok, f"max rel err {worst:.2e} (<1e-9), {elapsed:.2f} s (<10 s)")
    assert worst < 1e-9
    assert elapsed < 10.0


def _shifted_sum_echo(s, d):
    n, m = len(s), len(d)
    ext = list(s) + [0j] * (m - 1)
    return np.array([sum(d[c] * ext[i - c + m - 1] for c in range(m)) for i in range(n)])


def _brute_dft(x, sign=-1):
    n = len(x)
    return np.array(
        [sum(x[k] * cmath.exp(sign * 2j * cmath.pi * i * k / n) for k in range(n)) / n**0.5 for i in range(n)]
    )


def test_c2_oracle_equivalence():
    rng = np.random.default_rng(2)
    worst_matrix = worst_dft = 0.0
    for t in range(50):
        n = int(rng.integers(4, 65))
        m = int(rng.integers(2, n))
        pulse = design_pulse(DesignConfig(n=n, m=m, q=10, seed=t))
        scene = random_scene(m, 1.0, density=float(rng.uniform(0.2, 1.0)), seed=t)
        u = synthesize_received(pulse, scene, 0.0).u
        direct = _shifted_sum_echo(pulse.s, scene.d)
        matrix = channel_matrix(scene, n) @ pulse.transmitted
        worst_matrix = max(worst_matrix, np.max(np.abs(matrix - direct)), np.max(np.abs(u - direct)))
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for got, ref in (
            (dft(x, n), _brute_dft(x)),
            (idft(x, n), _brute_dft(x, +1)),
            (dft_reference(x), _brute_dft(x)),
            (idft_reference(x), _brute_dft(x, +1)),
            (oversampled_time(x, 2)[::2] * np.sqrt(2), _brute_dft(x, +1)),
        ):
            worst_dft = max(worst_dft, np.max(np.abs(got - ref)))
    ok = worst_matrix < 1e-12 and worst_dft < 1e-12
    record_criterion(
        2, "oracle equivalence", ok, f"matrix vs direct sum {worst_matrix:.2e}, DFT vs brute force {worst_dft:.2e} (<1e-12)"
    )
    assert worst_matrix < 1e-12
    assert worst_dft < 1e-12


@pytest.fixture(scope="module")
def q40_records():
    start = time.perf_counter()
    records, summary = monte_carlo_designs(DesignConfig(n=128, m=96, l=4, q=40, papr_d_db=1.0, g_f=0.05), 10_000)
    return records, summary, time.perf_counter() - start


def test_c3_design_quality_monte_carlo(q40_records):
    records, summary, elapsed = q40_records
    papr = np.array([r.papr_db for r in records])
    xi = np.array([r.xi_db for r in records])
    smin = np.array([r.s_min_norm for r in records])
    f_papr = np.mean(papr < 3.5)
    f_xi = np.mean(xi > -0.4)
    f_joint = summary.count(papr_max_db=3.0, xi_min_db=-0.4) / summary.trials
    f_smin = summary.count(s_min_norm=0.8) / summary.trials
    assert f_joint == np.mean((papr <= 3.0) & (xi >= -0.4))
    assert f_smin == np.mean(smin >= 0.8)
    checks = {
        "PAPR<3.5": (f_papr, 0.40, 0.90),
        "xi>-0.4": (f_xi, 0.60, 0.95),
        "joint": (f_joint, 0.07, 0.25),
        "Smin>=0.8": (f_smin, 0.01, 0.08),
    }
    ok = all(lo <= v <= hi for v, lo, hi in checks.values()) and elapsed < 600
    detail = ", ".join(f"{k} {v:.4f} in [{lo}, {hi}]" for k, (v, lo, hi) in checks.items())
    record_criterion(3, "design-quality Monte Carlo (10^4 trials)", ok, f"{detail}, {elapsed:.1f} s")
    for v, lo, hi in checks.values():
        assert lo <= v <= hi
    assert elapsed < 600


def test_c4_q_monotonicity(q40_records):
    fractions = {}
    for q in (10, 20):
        records, _ = monte_carlo_designs(DesignConfig(q=q), 2000)
        fractions[q] = np.mean([r.papr_db < 3.5 for r in records])
    fractions[40] = np.mean([r.papr_db < 3.5 for r in q40_records[0][:2000]])
    gaps = (fractions[20] - fractions[10], fractions[40] - fractions[20])
    ok = min(gaps) > 0.05
    detail = ", ".join(f"Q={q}: {f:.4f}" for q, f in fractions.items()) + f", gaps {gaps[0]:.4f}, {gaps[1]:.4f} (>0.05)"
    record_criterion(4, "Q-monotonicity at 3.5 dB", ok, detail)
    assert min(gaps) > 0.05


def test_c5_sinr_sweep():
    start = time.perf_counter()
    grid = np.arange(-10.0, 21.0)
    curve = sinr_sweep(grid, lfm_sequence(33), 96, s_min_norm=0.8)
    cross = crossing_point(curve)
    pulse = next(
        p for p in (design_pulse(DesignConfig(seed=s)) for s in range(2000)) if 0.8 <= p.metrics.s_min_norm < 0.85
    )
    own = sinr_sweep(grid, lfm_sequence(pulse.nt), pulse.m, weights=pulse.weights)
    excess = float(np.mean(own.ofdm_true_db - own.ofdm_bound_db))
    elapsed = time.perf_counter() - start
    ok = cross is not None and 4.0 <= cross <= 8.0 and abs(excess - 1.4) <= 1.0 and elapsed < 60
    record_criterion(
        5,
        "SINR sweep crossing and true-vs-bound gap",
        ok,
        f"crossing {cross:.3f} dB in [4, 8]; seed {pulse.config.seed} (S_min {pulse.metrics.s_min_norm:.3f}) "
        f"true-bound {excess:.3f} dB in 1.4+-1.0; {elapsed:.1f} s",
    )
    assert cross is not None and 4.0 <= cross <= 8.0
    assert abs(excess - 1.4) <= 1.0
    assert elapsed < 60


def test_c6_range_line_reduced_scale():
    m, n = 1000, 1074
    pulse = design_pulse(DesignConfig(n=n, m=m, seed=0))
    targets = cluster_targets(m)
    scene = sparse_scene(m, targets)
    exact = ofdm_range_compress(synthesize_received(pulse, scene, 0.0), pulse).d_hat
    err_ofdm = np.max(np.abs(exact - scene.d)) / np.max(np.abs(scene.d))

    chirp = lfm_sequence(pulse.nt)
    lfm = lfm_range_compress(synthesize_lfm_received(chirp, scene, 0.0), chirp, m).d_hat
    weakest = sorted(targets, key=lambda t: abs(t[1]))[:2]
    weak_err = [abs(lfm[c] - a) / abs(a) for c, a in weakest]

    predicted = np.sqrt(np.sum(np.abs(pulse.weights) ** -2)) / n
    ratios = {}
    for sigma_sq in (0.05, 0.1):
        sq = [
            np.abs(ofdm_range_compress(synthesize_received(pulse, scene, sigma_sq, seed), pulse).d_hat - scene.d) ** 2
            for seed in range(100)
        ]
        ratios[sigma_sq] = np.sqrt(np.mean(sq)) / (np.sqrt(sigma_sq) * predicted)

    ok = err_ofdm < 1e-9 and min(weak_err) > 0.5 and all(abs(r - 1) < 0.2 for r in ratios.values())
    detail = (
        f"OFDM noiseless err {err_ofdm:.2e}; LFM weak-target rel err "
        + ", ".join(f"cell {c}: {e:.3f}" for (c, _), e in zip(weakest, weak_err))
        + " (>0.5); RMS/prediction "
        + ", ".join(f"sigma^2={s}: {r:.4f}" for s, r in ratios.items())
    )
    record_criterion(6, "range line at M=1000", ok, detail)
    assert err_ofdm < 1e-9
    assert min(weak_err) > 0.5
    for r in ratios.values():
        assert abs(r - 1) < 0.2


def test_c7_noise_propagation():
    pulse = design_pulse(DesignConfig(seed=11))
    sigma_sq = 0.1
    zero = SwathScene(np.zeros(pulse.m))
    # raw IDFT outputs before the 1/sqrt(N) scaling: sqrt(N) * d_hat
    samples = np.concatenate(
        [
            np.sqrt(pulse.n) * ofdm_range_compress(synthesize_received(pulse, zero, sigma_sq, seed), pulse).d_hat
            for seed in range(1050)
        ]
    )
    predicted = sigma_sq / pulse.n * np.sum(np.abs(pulse.weights) ** -2)
    ratio = np.mean(np.abs(samples) ** 2) / predicted
    ok = samples.size >= 100_000 and abs(ratio - 1) < 0.05
    record_criterion(7, "noise propagation", ok, f"{samples.size} samples, empirical/predicted {ratio:.4f} (within 5%)")
    assert samples.size >= 100_000
    assert abs(ratio - 1) < 0.05


def _snapshot(root):
    return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_c8_cli_determinism(tmp_path, capsys):
    from ofdm_sar.formats import save_scene

    save_scene(tmp_path / "scene.json", random_scene(48, 1.0, density=0.3, seed=4))
    commands = [
        ["design", "--n", "64", "--m", "48", "--q", "20", "--seed", "3", "--out", "pulse.json"],
        ["design", "--n", "64", "--m", "48", "--q", "10", "--best-of", "5", "--out", "best.json"],
        ["montecarlo", "--trials", "20", "--n", "64", "--m", "48", "--q", "10", "--base-seed", "5", "--out-dir", "mc"],
        ["rangeline", "--pulse", "pulse.json", "--scene", "scene.json", "--sigma-sq", "0", "0.05",
         "--seed", "9", "--save-received", "--out-dir", "rl"],
        ["rangeline", "--pulse", "pulse.json", "--sigma-sq", "0.1", "--out-dir", "rl_default"],
        ["reconstruct", "--pulse", "pulse.json", "--received", "rl/received_sigma0.05.json", "--out", "est.csv"],
        ["sinr-sweep", "--pulse", "pulse.json", "--out", "sweep_pulse.csv"],
        ["sinr-sweep", "--out", "sweep.csv"],
        ["timing", "--n", "10749", "--m", "10000", "--swath-width", "10000", "--out", "timing.csv"],
    ]
    import os

    cwd = os.getcwd()
    os.chdir(tmp_path)
    try:
        runs, stdout = [], []
        for _ in range(2):
            for cmd in commands:
                assert main(cmd) == 0
            stdout.append(capsys.readouterr().out)
            runs.append(_snapshot(tmp_path))
    finally:
        os.chdir(cwd)
    differing = sorted(str(k) for k in runs[0] if runs[0][k] != runs[1].get(k))
    ok = not differing and runs[0].keys() == runs[1].keys() and stdout[0] == stdout[1]
    record_criterion(
        8, "CLI determinism", ok, f"{len(commands)} commands, {len(runs[0])} files compared, differing: {differing or 'none'}"
    )
    assert not differing
    assert runs[0].keys() == runs[1].keys()
    assert stdout[0] == stdout[1]
