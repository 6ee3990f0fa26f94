"""Text file formats: pulse, scene and received-signal JSON documents, and
comma-separated tables that start with a single ``#``-prefixed JSON header line.

Floats in JSON documents are written with 17 significant digits so every
sample survives a round trip bit-for-bit.
"""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .design import DesignConfig, pulse_from_sequence
from .scene import ReceivedSignal, SwathScene, sparse_scene

PULSE_FORMAT = "ofdm-sar-pulse"
RECEIVED_FORMAT = "ofdm-sar-received"
SCENE_FORMAT = "ofdm-sar-scene"


class FormatError(ValueError):
    pass


def _num(x):
    x = float(x)
    if not math.isfinite(x):
        return json.dumps(x)
    return format(x, ".17g")


def _dumps(obj, indent=0):
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_dumps(v, indent + 1) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return json.dumps(obj)


def write_json(path, obj):
    Path(path).write_text(_dumps(obj) + "\n")


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


def pulse_to_dict(pulse):
    cfg = pulse.config
    met = pulse.metrics
    return {
        "format": PULSE_FORMAT,
        "version": __version__,
        "n": pulse.n,
        "m": pulse.m,
        "l": cfg.l if cfg else None,
        "q": cfg.q if cfg else None,
        "papr_d_db": cfg.papr_d_db if cfg else None,
        "g_f": cfg.g_f if cfg else None,
        "seed": cfg.seed if cfg else None,
        "s_re": pulse.s.real,
        "s_im": pulse.s.imag,
        "metrics": {
            "papr_db": met.papr_db,
            "xi_db": met.xi_db,
            "s_min_norm": met.s_min_norm,
            "oob_energy": met.oob_energy,
        },
    }


def save_pulse(path, pulse):
    write_json(path, pulse_to_dict(pulse))


def pulse_from_dict(doc, oversampling=4):
    """Rebuild a pulse, checking its zero head and unit energy."""
    try:
        n, m = int(doc["n"]), int(doc["m"])
        s = np.asarray(doc["s_re"], dtype=float) + 1j * np.asarray(doc["s_im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed pulse document: {exc}") from exc
    if s.size != n:
        raise FormatError(f"pulse declares n={n} but holds {s.size} samples")
    if not 2 <= m <= n:
        raise FormatError(f"pulse declares m={m}, need 2 <= m <= n={n}")
    if np.any(s[: m - 1] != 0):
        raise FormatError(f"pulse head s_0..s_{m - 2} is not all zero")
    energy = float(np.sum(np.abs(s) ** 2))
    if abs(energy - 1.0) > 1e-12:
        raise FormatError(f"pulse energy is {energy!r}, expected 1")
    cfg = None
    if doc.get("q") is not None:
        cfg = DesignConfig(
            n=n,
            m=m,
            l=int(doc["l"]),
            q=int(doc["q"]),
            papr_d_db=float(doc["papr_d_db"]),
            g_f=float(doc["g_f"]),
            seed=int(doc["seed"]),
        )
        oversampling = cfg.l
    elif doc.get("l") is not None:
        oversampling = int(doc["l"])
    return pulse_from_sequence(s, m, oversampling, config=cfg)


def load_pulse(path):
    doc = read_json(path)
    if doc.get("format", PULSE_FORMAT) != PULSE_FORMAT:
        raise FormatError(f"{path}: not a pulse file")
    return pulse_from_dict(doc)


def scene_to_dict(scene):
    cells = np.flatnonzero(scene.d)
    return {
        "format": SCENE_FORMAT,
        "m": scene.m,
        "sigma_d_sq": scene.sigma_d_sq,
        "targets": [{"cell": int(c), "re": scene.d[c].real, "im": scene.d[c].imag} for c in cells],
    }


def save_scene(path, scene):
    write_json(path, scene_to_dict(scene))


def load_scene(path):
    doc = read_json(path)
    try:
        m = int(doc["m"])
        targets = [(t["cell"], complex(float(t["re"]), float(t.get("im", 0.0)))) for t in doc["targets"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed scene ({exc})") from exc
    scene = sparse_scene(m, targets)
    if doc.get("sigma_d_sq") is not None:
        scene = SwathScene(scene.d, float(doc["sigma_d_sq"]))
    return scene


def save_received(path, received):
    write_json(
        path,
        {
            "format": RECEIVED_FORMAT,
            "n": received.n,
            "sigma_sq": received.sigma_sq,
            "seed": received.seed,
            "u_re": received.u.real,
            "u_im": received.u.imag,
        },
    )


def load_received(path):
    doc = read_json(path)
    try:
        u = np.asarray(doc["u_re"], dtype=float) + 1j * np.asarray(doc["u_im"], dtype=float)
        n = int(doc.get("n", u.size))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed received signal ({exc})") from exc
    if u.size != n:
        raise FormatError(f"{path}: declares n={n} but holds {u.size} samples")
    return ReceivedSignal(u, float(doc.get("sigma_sq", 0.0)), doc.get("seed"))


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def header_line(header):
    return "# " + json.dumps(header, sort_keys=True, separators=(",", ":"), default=_jsonable) + "\n"


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_table(path, header, columns, rows):
    """Write a CSV table preceded by a one-line ``# {json}`` header."""
    buf = io.StringIO()
    buf.write(header_line(header))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows([_cell(v) for v in row] for row in rows)
    Path(path).write_text(buf.getvalue())


def read_table(path):
    """Return ``(header, columns, rows)`` with every row as a list of strings."""
    first, _, body = Path(path).read_text().partition("\n")
    if not first.startswith("# "):
        raise FormatError(f"{path}: missing '# ' header line")
    header = json.loads(first[2:])
    columns, *rows = [row for row in csv.reader(io.StringIO(body)) if row]
    return header, columns, rows
