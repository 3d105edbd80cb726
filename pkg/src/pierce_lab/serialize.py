"""JSON instance files and digests.

Instance file layout (format_version 1)::

    {"format_version": 1,
     "points": [[x, y], ...],
     "rects": [{"x": [lo, hi], "y": [lo, hi]}, ...],
     "metadata": {...}}          # optional

Coordinates are JSON integers in the signed 64-bit range. Field order is
fixed so that equal instances serialize to identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .dinterval import DIntervalFamily
from .errors import InvalidParameters
from .geom import Point, Rect
from .trace import Instance

FORMAT_VERSION = 1


def _int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidParameters(f"{what} must be a JSON integer, got {v!r}")
    return v


def instance_to_dict(inst: Instance) -> dict:
    out = {
        "format_version": FORMAT_VERSION,
        "points": [[p.x, p.y] for p in inst.points],
        "rects": [{"x": [r.x_lo, r.x_hi], "y": [r.y_lo, r.y_hi]} for r in inst.rects],
    }
    if inst.metadata:
        out["metadata"] = inst.metadata
    return out


def instance_from_dict(data: dict) -> Instance:
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise InvalidParameters(f"unsupported format_version {version!r}")
    try:
        points = [Point(_int(x, "point x"), _int(y, "point y")) for x, y in data["points"]]
        rects = [
            Rect(
                _int(r["x"][0], "x_lo"),
                _int(r["x"][1], "x_hi"),
                _int(r["y"][0], "y_lo"),
                _int(r["y"][1], "y_hi"),
            )
            for r in data["rects"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidParameters):
            raise
        raise InvalidParameters(f"malformed instance: {exc}") from exc
    return Instance.build(points, rects, data.get("metadata") or {})


def dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def instance_digest(inst: Instance) -> str:
    """SHA-256 over the canonical geometry (metadata excluded)."""
    core = instance_to_dict(Instance(inst.points, inst.rects))
    return hashlib.sha256(dumps(core).encode()).hexdigest()


def save_instance(inst: Instance, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(instance_to_dict(inst)) + "\n")
    return path


def load_instance(path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def dinterval_to_dict(fam: DIntervalFamily) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "d": fam.d,
        "line_sizes": list(fam.line_sizes),
        "members": [[None if r is None else [r[0], r[1]] for r in m] for m in fam.members],
    }


def dinterval_from_dict(data: dict) -> DIntervalFamily:
    if data.get("format_version") != FORMAT_VERSION:
        raise InvalidParameters(f"unsupported format_version {data.get('format_version')!r}")
    members = tuple(
        tuple(None if r is None else (_int(r[0], "range lo"), _int(r[1], "range hi")) for r in m)
        for m in data["members"]
    )
    return DIntervalFamily(_int(data["d"], "d"), tuple(data["line_sizes"]), members)


def save_dinterval(fam: DIntervalFamily, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(dinterval_to_dict(fam)) + "\n")
    return path


def load_dinterval(path) -> DIntervalFamily:
    return dinterval_from_dict(json.loads(Path(path).read_text()))


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())
