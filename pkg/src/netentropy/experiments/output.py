"""CSV and manifest writers. Floats are written with 12 significant digits."""

from __future__ import annotations

import csv
import hashlib
import json
import platform
from pathlib import Path

import numpy as np

SERIES_HEADER = ("t", "s_x", "s_e", "s_vn", "mean_x", "mean_y", "e_s")
SNAPSHOT_HEADER = ("site", "x", "y", "probability")
DELTA_HEADER = ("delta", "s_x_at_reversal")
THERMAL_HEADER = ("temperature", "s_x", "s_vn", "e_s")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        # adding 0.0 turns -0.0 into 0.0
        return f"{float(value) + 0.0:.12g}"
    return str(value)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc
    return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Read a numeric CSV written by :func:`write_csv`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, np.array(rows, dtype=float).reshape(-1, len(header))


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir, config: dict, seeds: dict, files: list[Path], summary: dict,
                   started: str, elapsed: float, version: str) -> Path:
    out_dir = Path(out_dir)
    doc = {
        "config": config,
        "code_version": version,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "seeds": seeds,
        "started_utc": started,
        "wall_clock_seconds": round(elapsed, 3),
        "files": {p.name: sha256_file(p) for p in sorted(files)},
        "summary": summary,
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(doc, indent=2, default=_json_default) + "\n")
    return path


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")
