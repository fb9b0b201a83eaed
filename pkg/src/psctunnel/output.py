"""Deterministic file emission: CSV and JSON, written atomically.

Floats are rendered with 17 significant digits (round-trip exact), field
order is fixed by construction, and files end with a single LF so identical
runs produce byte-identical outputs.
"""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile

import numpy as np

__all__ = [
    "fmt",
    "write_text_atomic",
    "curve_csv",
    "sweep_csv",
    "to_jsonable",
    "dump_json",
]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_text_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


CURVE_COLUMNS = ("s", "t", "r", "theta", "k", "kappa_exact_flat",
                 "kappa_lower_bound", "condition_margin")


def curve_csv(samples, kappa_exact, kappa_bound, margin) -> str:
    """Curve table with the fixed column set, one row per sample."""
    lines = [",".join(CURVE_COLUMNS)]
    cols = (samples.s, samples.t, samples.r, samples.theta, samples.k,
            kappa_exact, kappa_bound, margin)
    for row in zip(*cols):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def sweep_csv(points) -> str:
    header = ("delta0", "neck_length", "diam_upper", "vol_Uprime",
              "r_inf", "certified")
    lines = [",".join(header)]
    for p in points:
        lines.append(",".join([
            fmt(p.delta0), fmt(p.neck_length), fmt(p.diam_upper),
            fmt(p.vol_Uprime), fmt(p.r_inf), str(p.certified).lower(),
        ]))
    return "\n".join(lines) + "\n"


def to_jsonable(obj):
    """Recursively convert dataclasses / numpy scalars for json.dumps."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def dump_json(payload) -> str:
    return json.dumps(to_jsonable(payload), indent=2, allow_nan=True) + "\n"
