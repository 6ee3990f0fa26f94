"""Command-line front end: ``ofdm-sar <command> [flags]`` or ``python -m ofdm_sar``.

Every command also takes ``--config FILE``, a JSON object whose keys are
flag names (``papr-d`` or ``papr_d``); flags given on the command line win.
Tables are written as CSV with a ``# {json}`` first line recording the tool
version and the full parameter set.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import crossing_point, monte_carlo_designs, sinr_sweep
from .design import DesignConfig, design_pulse, search_pulse
from .formats import (
    FormatError,
    load_pulse,
    load_received,
    load_scene,
    save_pulse,
    save_received,
    write_table,
)
from .reconstruction import lfm_range_compress, ofdm_range_compress
from .scene import (
    cluster_targets,
    lfm_sequence,
    range_resolution,
    sparse_scene,
    synthesize_lfm_received,
    synthesize_received,
    timing_constraints,
)

TOOL = "ofdm-sar"


class UsageError(Exception):
    pass


def _header(command, args, **extra):
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config")}
    head = {"tool": TOOL, "version": __version__, "command": command, "params": params}
    head.update(extra)
    return head


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _design_config(args, seed):
    try:
        return DesignConfig(
            n=args.n, m=args.m, l=args.l, q=args.q, papr_d_db=args.papr_d, g_f=args.gf, seed=seed
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_design_flags(p, n=None, m=None):
    p.add_argument("--n", type=int, default=n, help="number of subcarriers N")
    p.add_argument("--m", type=int, default=m, help="number of range cells M")
    p.add_argument("--l", type=int, default=4, help="oversampling factor L")
    p.add_argument("--q", type=int, default=40, help="iterations Q")
    p.add_argument("--papr-d", type=float, default=1.0, help="clipping level PAPR_d in dB")
    p.add_argument("--gf", type=float, default=0.05, help="frequency clipping factor G_f")


def _print_metrics(metrics):
    print(f"papr_db={metrics.papr_db:.6f}")
    print(f"xi_db={metrics.xi_db:.6f}")
    print(f"s_min_norm={metrics.s_min_norm:.6f}")
    print(f"oob_energy={metrics.oob_energy:.6e}")


def cmd_design(args):
    _require(args, "n", "m")
    cfg = _design_config(args, args.seed)
    if args.best_of < 1:
        raise UsageError("--best-of must be >= 1")
    if args.best_of == 1:
        pulse = design_pulse(cfg)
    else:
        pulse = search_pulse(cfg, args.best_of, args.xi_min)
    save_pulse(args.out, pulse)
    # reload to check the written file is a valid zero-head pulse
    loaded = load_pulse(args.out)
    print(f"seed={loaded.config.seed}")
    _print_metrics(loaded.metrics)
    print(f"wrote {args.out}")
    return 0


def _cdf_rows(cdf):
    values, heights = cdf
    return zip(values.tolist(), heights.tolist())


def cmd_montecarlo(args):
    _require(args, "trials")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    cfg = _design_config(args, args.base_seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records, summary = monte_carlo_designs(cfg, args.trials, args.base_seed, args.workers)
    head = _header("montecarlo", args)
    write_table(out / "trials.csv", head, ["seed", "papr_db", "xi_db", "s_min_norm", "usable"],
                ((r.seed, r.papr_db, r.xi_db, r.s_min_norm, r.usable) for r in records))
    write_table(out / "papr_cdf.csv", head, ["value_db", "cumulative_fraction"], _cdf_rows(summary.papr_cdf))
    write_table(out / "xi_cdf.csv", head, ["value_db", "cumulative_fraction"], _cdf_rows(summary.xi_cdf))
    write_table(out / "s_min_cdf.csv", head, ["value_norm", "cumulative_fraction"], _cdf_rows(summary.s_min_cdf))
    write_table(
        out / "thresholds.csv",
        head,
        ["table", "papr_max_db", "xi_min_db", "s_min_norm", "count", "fraction", "trials"],
        ((t.table, t.papr_max_db, t.xi_min_db, t.s_min_norm, t.count, t.fraction, summary.trials)
         for t in summary.thresholds),
    )
    for t in summary.thresholds:
        if t.table == "papr_xi":
            print(f"papr<={t.papr_max_db} dB & xi>={t.xi_min_db} dB: {t.count} ({t.fraction:.4f})")
        else:
            print(f"s_min>={t.s_min_norm}/sqrt(N): {t.count} ({t.fraction:.4f})")
    if summary.unusable:
        print(f"unusable pulses (zero weight): {summary.unusable}")
    return 0


def _estimate_rows(d_hat, rho):
    mag = np.abs(d_hat)
    norm = float(mag.max()) if mag.size and mag.max() > 0 else 1.0
    rows = [(c, c * rho, v.real, v.imag, mag[c] / norm) for c, v in enumerate(d_hat)]
    return rows, norm


def _write_estimates(path, head, d_hat, rho):
    rows, norm = _estimate_rows(d_hat, rho)
    head = dict(head, normalization=norm)
    write_table(path, head, ["cell", "range_m", "re", "im", "magnitude"], rows)
    return norm


def cmd_rangeline(args):
    _require(args, "pulse")
    pulse = load_pulse(args.pulse)
    if args.scene:
        scene = load_scene(args.scene)
    else:
        scene = sparse_scene(pulse.m, cluster_targets(pulse.m))
    if scene.m != pulse.m:
        raise UsageError(f"scene has {scene.m} cells but the pulse was designed for M={pulse.m}")
    nt = args.lfm_length or pulse.nt
    chirp = lfm_sequence(nt)
    rho = range_resolution(args.sample_rate)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, sigma_sq in enumerate(args.sigma_sq):
        if sigma_sq < 0:
            raise UsageError("--sigma-sq values must be >= 0")
        seed = args.seed + i
        received = synthesize_received(pulse, scene, sigma_sq, seed)
        echo = synthesize_lfm_received(chirp, scene, sigma_sq, seed)
        head = _header("rangeline", args, sigma_sq=sigma_sq, noise_seed=seed)
        tag = f"sigma{sigma_sq!r}"
        ofdm = ofdm_range_compress(received, pulse).d_hat
        lfm = lfm_range_compress(echo, chirp, scene.m).d_hat
        _write_estimates(out / f"ofdm_{tag}.csv", dict(head, path="ofdm"), ofdm, rho)
        _write_estimates(out / f"lfm_{tag}.csv", dict(head, path="lfm"), lfm, rho)
        if args.save_received:
            save_received(out / f"received_{tag}.json", received)
        err_o = np.sqrt(np.mean(np.abs(ofdm - scene.d) ** 2))
        err_l = np.sqrt(np.mean(np.abs(lfm - scene.d) ** 2))
        print(f"sigma_sq={sigma_sq!r}: rms error ofdm={err_o:.3e} lfm={err_l:.3e}")
    return 0


def cmd_reconstruct(args):
    _require(args, "pulse", "received", "out")
    pulse = load_pulse(args.pulse)
    received = load_received(args.received)
    d_hat = ofdm_range_compress(received, pulse).d_hat
    head = _header("reconstruct", args, path="ofdm")
    _write_estimates(args.out, head, d_hat, range_resolution(args.sample_rate))
    print(f"wrote {args.out}")
    return 0


def cmd_sinr_sweep(args):
    if args.grid is not None:
        grid = np.asarray(args.grid, dtype=float)
    else:
        if args.grid_step <= 0:
            raise UsageError("--grid-step must be positive")
        count = int(np.floor((args.grid_stop - args.grid_start) / args.grid_step + 1e-9)) + 1
        grid = args.grid_start + args.grid_step * np.arange(max(count, 0))
    if grid.size == 0:
        raise UsageError("empty input-SNR grid")
    weights = None
    m, nt, s_min = args.m, args.nt, args.s_min
    if args.pulse:
        pulse = load_pulse(args.pulse)
        weights = pulse.weights
        m = m or pulse.m
        nt = nt or pulse.nt
    m = m or 96
    nt = nt or 33
    aggregate = args.aggregate
    if aggregate not in ("interior", "mean"):
        aggregate = int(aggregate)
    curve = sinr_sweep(grid, lfm_sequence(nt), m, weights=weights, s_min_norm=s_min, aggregate=aggregate)
    cross = crossing_point(curve)
    head = _header("sinr-sweep", args, crossing_db=cross, resolved={"m": m, "nt": nt})
    rows = zip(curve.snr_in_db.tolist(), curve.lfm_sinr_db.tolist(), curve.ofdm_bound_db.tolist(),
               curve.ofdm_true_db.tolist())
    write_table(args.out, head, ["snr_in_db", "lfm_sinr_db", "ofdm_bound_db", "ofdm_true_db"], rows)
    print(f"crossing_db={cross}")
    print(f"wrote {args.out}")
    return 0


def cmd_timing(args):
    _require(args, "n", "m", "swath_width")
    try:
        report = timing_constraints(args.n, args.m, args.sample_rate, args.swath_width)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    values = {
        "pulse_duration_s": report.pulse_duration,
        "min_range_m": report.min_range,
        "max_prf_hz": report.max_prf,
    }
    for key, value in values.items():
        print(f"{key}={value!r}")
    if args.out:
        write_table(args.out, _header("timing", args), list(values), [tuple(values.values())])
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="JSON file of flag values")
        p.set_defaults(func=func)
        return p

    p = command("design", cmd_design, "design one pulse and write it to a pulse file")
    _add_design_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--best-of", type=int, default=1, help="try this many consecutive seeds")
    p.add_argument("--xi-min", type=float, default=-0.4, help="xi floor (dB) for --best-of")
    p.add_argument("--out", default="pulse.json")

    p = command("montecarlo", cmd_montecarlo, "design-quality Monte Carlo (CDFs and threshold tables)")
    _add_design_flags(p, n=128, m=96)
    p.add_argument("--trials", type=int)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", default="montecarlo")

    p = command("rangeline", cmd_rangeline, "image one range line with OFDM and LFM pulses")
    p.add_argument("--pulse")
    p.add_argument("--scene", help="scene JSON; default is the seven-target cluster")
    p.add_argument("--sigma-sq", type=float, nargs="+", default=[0.0, 0.05, 0.1])
    p.add_argument("--seed", type=int, default=0, help="noise seed of the first sigma; +1 per further value")
    p.add_argument("--lfm-length", type=int, default=None, help="chirp length (default N - M + 1)")
    p.add_argument("--sample-rate", type=float, default=150e6)
    p.add_argument("--save-received", action="store_true")
    p.add_argument("--out-dir", default="rangeline")

    p = command("reconstruct", cmd_reconstruct, "OFDM range compression of a saved received signal")
    p.add_argument("--pulse")
    p.add_argument("--received")
    p.add_argument("--sample-rate", type=float, default=150e6)
    p.add_argument("--out")

    p = command("sinr-sweep", cmd_sinr_sweep, "mean SINR of LFM vs OFDM over input SNR")
    p.add_argument("--m", type=int, default=None, help="range cells (default 96 or the pulse's)")
    p.add_argument("--nt", type=int, default=None, help="chirp length (default 33 or the pulse's)")
    p.add_argument("--s-min", type=float, default=0.8, help="S_min in units of 1/sqrt(N)")
    p.add_argument("--pulse", help="pulse file for the true OFDM SINR curve")
    p.add_argument("--grid-start", type=float, default=-10.0)
    p.add_argument("--grid-stop", type=float, default=20.0)
    p.add_argument("--grid-step", type=float, default=1.0)
    p.add_argument("--grid", type=float, nargs="*", default=None, help="explicit grid in dB")
    p.add_argument("--aggregate", default="interior", help="interior, mean or a cell index")
    p.add_argument("--out", default="sinr_sweep.csv")

    p = command("timing", cmd_timing, "pulse duration, minimum range and maximum PRF")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--sample-rate", type=float, default=150e6)
    p.add_argument("--swath-width", type=float, help="meters")
    p.add_argument("--out")
    return parser


def _apply_config(parser, argv):
    """Re-parse `argv` with defaults taken from the ``--config`` file, if any."""
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        values = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {args.config}: {exc}")
    if not isinstance(values, dict):
        parser.error(f"config {args.config} must hold a JSON object")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    defaults = {}
    for key, value in values.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("config", "help"):
            parser.error(f"config {args.config}: unknown field {key!r}")
        defaults[dest] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None):
    parser = build_parser()
    args = _apply_config(parser, argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(f"{args.command}: {exc}")
    except (FormatError, ValueError, OSError) as exc:
        print(f"{TOOL} {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
