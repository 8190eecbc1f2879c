"""Self-describing gridded-data container (.hwx).

Layout: one line of JSON (the header) terminated by '\\n', followed by the
raw little-endian float32 arrays of every declared field, concatenated in
header order, C row-major with dims in the declared order.

The same container carries weather grids (time/alt/lat/lon axes, several
fields) and DEMs (lat/lon axes, one elevation field).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import HwxFormatError

FORMAT_NAME = "hwx"
SCHEMA_VERSION = 1

AXIS_ORDER = ("time", "alt", "lat", "lon")


@dataclass
class FieldSpec:
    name: str
    units: str
    dims: tuple[str, ...]
    accumulation_step_s: float | None = None
    nodata: float | None = None
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = {"name": self.name, "units": self.units, "dims": list(self.dims)}
        if self.accumulation_step_s is not None:
            d["accumulation_step_s"] = self.accumulation_step_s
        if self.nodata is not None:
            d["nodata"] = self.nodata
        if self.meta:
            d["meta"] = self.meta
        return d

    @classmethod
    def from_json(cls, d: dict) -> "FieldSpec":
        return cls(
            name=d["name"],
            units=d.get("units", ""),
            dims=tuple(d["dims"]),
            accumulation_step_s=d.get("accumulation_step_s"),
            nodata=d.get("nodata"),
            meta=d.get("meta", {}),
        )


def _check_axis(name: str, values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise HwxFormatError(f"axis '{name}' must be a non-empty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise HwxFormatError(f"axis '{name}' contains non-finite values")
    if arr.size > 1 and not np.all(np.diff(arr) > 0):
        raise HwxFormatError(f"axis '{name}' is not strictly increasing")
    return arr


def save_container(
    path: str | Path,
    axes: dict[str, np.ndarray],
    fields: list[FieldSpec],
    arrays: dict[str, np.ndarray],
    meta: dict | None = None,
) -> None:
    path = Path(path)
    axes_out = {}
    for name, values in axes.items():
        if name not in AXIS_ORDER:
            raise HwxFormatError(f"unknown axis '{name}'")
        axes_out[name] = _check_axis(name, values).tolist()

    for spec in fields:
        if spec.name not in arrays:
            raise HwxFormatError(f"field '{spec.name}' declared but not provided")
        expected = tuple(len(axes_out[d]) for d in spec.dims)
        arr = arrays[spec.name]
        if tuple(arr.shape) != expected:
            raise HwxFormatError(
                f"field '{spec.name}' shape {arr.shape} != declared {expected}"
            )

    header = {
        "format": FORMAT_NAME,
        "version": SCHEMA_VERSION,
        "axes": axes_out,
        "fields": [s.to_json() for s in fields],
        "meta": meta or {},
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        for spec in fields:
            arr = np.ascontiguousarray(arrays[spec.name], dtype="<f4")
            fh.write(arr.tobytes())


def load_container(
    path: str | Path,
) -> tuple[dict[str, np.ndarray], list[FieldSpec], dict[str, np.ndarray], dict]:
    path = Path(path)
    with open(path, "rb") as fh:
        header_line = fh.readline()
        if not header_line.endswith(b"\n"):
            raise HwxFormatError(f"{path}: missing header line")
        try:
            header = json.loads(header_line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise HwxFormatError(f"{path}: malformed JSON header: {exc}") from exc
        if header.get("format") != FORMAT_NAME:
            raise HwxFormatError(f"{path}: not a {FORMAT_NAME} container")
        if header.get("version") != SCHEMA_VERSION:
            raise HwxFormatError(
                f"{path}: unsupported schema version {header.get('version')!r}"
            )
        axes = {
            name: _check_axis(name, np.asarray(vals, dtype=np.float64))
            for name, vals in header.get("axes", {}).items()
        }
        fields = [FieldSpec.from_json(d) for d in header.get("fields", [])]
        payload = fh.read()

    arrays: dict[str, np.ndarray] = {}
    offset = 0
    for spec in fields:
        for d in spec.dims:
            if d not in axes:
                raise HwxFormatError(
                    f"{path}: field '{spec.name}' references missing axis '{d}'"
                )
        shape = tuple(axes[d].size for d in spec.dims)
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * 4
        if offset + nbytes > len(payload):
            raise HwxFormatError(
                f"{path}: truncated payload for field '{spec.name}'"
            )
        arr = np.frombuffer(payload, dtype="<f4", count=count, offset=offset)
        arrays[spec.name] = arr.reshape(shape).copy()
        offset += nbytes
    if offset != len(payload):
        raise HwxFormatError(
            f"{path}: {len(payload) - offset} trailing bytes after declared fields"
        )
    return axes, fields, arrays, header.get("meta", {})
