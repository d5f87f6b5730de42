"""Schema-stable CSV/JSON emission and reproducibility sidecars.

CSV is the normative output: fixed header, fixed column order, full-precision
scientific notation, newline-terminated rows.  Reruns with the same inputs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17e}"
    return str(value)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])


def _json_safe(value):
    # strict JSON has no Infinity/NaN literals
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    records = [dict(zip(header, (_json_safe(v) for v in row))) for row in rows]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=2, sort_keys=False, allow_nan=False)
        fh.write("\n")


def write_sidecar(path, *, command, argv, version, seed=None, config_text=None, outputs=()):
    """Everything needed to reproduce the run byte-for-byte."""
    payload = {
        "command": command,
        "argv": list(argv),
        "package_version": version,
        "seed": seed,
        "outputs": list(outputs),
        "config": config_text,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
