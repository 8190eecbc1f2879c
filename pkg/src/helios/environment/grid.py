"""Weather grid: loading, validation, interpolation and kernel packing."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import kernels as K
from .errors import DomainError, HwxFormatError, WeatherValidationError
from .hwx import FieldSpec, load_container, save_container

FIELDS_3D = ("temperature", "relative_humidity", "wind_east", "wind_north")
FIELDS_2D = ("gust", "precipitation", "cape", "radiation_total", "radiation_direct")
ACCUMULATED = ("precipitation", "radiation_total", "radiation_direct")

_UNITS = {
    "temperature": "degC",
    "relative_humidity": "%",
    "wind_east": "m/s",
    "wind_north": "m/s",
    "gust": "m/s",
    "precipitation": "mm",
    "cape": "J/kg",
    "radiation_total": "J/m2",
    "radiation_direct": "J/m2",
}

_DOMAIN_AXES = {
    K.ST_DOMAIN_TIME: "time",
    K.ST_DOMAIN_LAT: "lat",
    K.ST_DOMAIN_LON: "lon",
    K.ST_DOMAIN_ALT: "alt",
}


@dataclass
class WeatherSample:
    """Point-in-time weather at a query location; rates, not accumulations."""

    temperature: float
    humidity: float
    wind_east: float
    wind_north: float
    gust: float
    precip_rate: float  # mm/h
    cape: float
    irradiance_total: float  # W/m2
    irradiance_direct: float  # W/m2

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "WeatherSample":
        return cls(
            temperature=float(v[K.S_TEMP]),
            humidity=float(v[K.S_HUM]),
            wind_east=float(v[K.S_WE]),
            wind_north=float(v[K.S_WN]),
            gust=float(v[K.S_GUST]),
            precip_rate=float(v[K.S_PRECIP]),
            cape=float(v[K.S_CAPE]),
            irradiance_total=float(v[K.S_IRRT]),
            irradiance_direct=float(v[K.S_IRRD]),
        )


@dataclass
class WeatherGrid:
    """4-D gridded weather: axes plus per-field arrays (stored as loaded).

    Accumulated fields keep their accumulation form here; the kernel pack
    converts them to rates once.
    """

    time_axis: np.ndarray
    alt_axis: np.ndarray
    lat_axis: np.ndarray
    lon_axis: np.ndarray
    fields3d: dict[str, np.ndarray]
    fields2d: dict[str, np.ndarray]
    accumulation_step_s: float
    meta: dict = field(default_factory=dict)
    _pack: tuple | None = field(default=None, repr=False, compare=False)

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        for name, axis in (
            ("time", self.time_axis),
            ("alt", self.alt_axis),
            ("lat", self.lat_axis),
            ("lon", self.lon_axis),
        ):
            if axis.ndim != 1 or axis.size == 0:
                raise WeatherValidationError(f"axis '{name}' empty or not 1-D")
            if axis.size > 1 and not np.all(np.diff(axis) > 0):
                raise WeatherValidationError(f"axis '{name}' not strictly increasing")

        shape3 = (
            self.time_axis.size,
            self.alt_axis.size,
            self.lat_axis.size,
            self.lon_axis.size,
        )
        shape2 = (self.time_axis.size, self.lat_axis.size, self.lon_axis.size)
        for name in FIELDS_3D:
            if name not in self.fields3d:
                raise WeatherValidationError(f"missing 3D field '{name}'")
            if tuple(self.fields3d[name].shape) != shape3:
                raise WeatherValidationError(
                    f"field '{name}' shape {self.fields3d[name].shape} != {shape3}"
                )
        for name in FIELDS_2D:
            if name not in self.fields2d:
                raise WeatherValidationError(f"missing 2D field '{name}'")
            if tuple(self.fields2d[name].shape) != shape2:
                raise WeatherValidationError(
                    f"field '{name}' shape {self.fields2d[name].shape} != {shape2}"
                )

        hum = self.fields3d["relative_humidity"]
        if hum.min() < -1e-6 or hum.max() > 100.0 + 1e-3:
            raise WeatherValidationError(
                f"relative_humidity outside [0, 100]: "
                f"min={hum.min():.3f} max={hum.max():.3f}"
            )
        for name in ("precipitation", "cape", "radiation_total", "radiation_direct"):
            arr = self.fields2d[name]
            if arr.min() < -1e-6:
                raise WeatherValidationError(f"field '{name}' has negative values")
        rt = self.fields2d["radiation_total"]
        rd = self.fields2d["radiation_direct"]
        slack = 1e-3 * max(1.0, float(rt.max()))
        if np.any(rd > rt + slack):
            raise WeatherValidationError(
                "radiation_direct exceeds radiation_total somewhere"
            )
        if self.accumulation_step_s <= 0:
            raise WeatherValidationError("accumulation_step_s must be positive")

    # -- kernel packing ---------------------------------------------------------

    def _step_lengths(self) -> np.ndarray:
        """Length in seconds of the accumulation interval ending at each node."""
        t = self.time_axis
        steps = np.empty(t.size)
        if t.size > 1:
            steps[1:] = np.diff(t)
            steps[0] = self.accumulation_step_s
        else:
            steps[0] = self.accumulation_step_s
        return steps

    def pack(self) -> tuple:
        """Kernel-ready float64 view: axes plus stacked field blocks (rates)."""
        if self._pack is None:
            f3 = np.stack(
                [self.fields3d[n].astype(np.float64) for n in FIELDS_3D], axis=0
            )
            steps = self._step_lengths()
            div = steps[:, None, None]
            f2_list = []
            for n in FIELDS_2D:
                arr = self.fields2d[n].astype(np.float64)
                if n == "precipitation":
                    arr = arr / div * 3600.0  # mm per step -> mm/h
                elif n in ("radiation_total", "radiation_direct"):
                    arr = arr / div  # J/m2 per step -> W/m2
                f2_list.append(arr)
            f2 = np.stack(f2_list, axis=0)
            self._pack = (
                np.ascontiguousarray(self.time_axis, dtype=np.float64),
                np.ascontiguousarray(self.alt_axis, dtype=np.float64),
                np.ascontiguousarray(self.lat_axis, dtype=np.float64),
                np.ascontiguousarray(self.lon_axis, dtype=np.float64),
                np.ascontiguousarray(steps),
                np.ascontiguousarray(f3),
                np.ascontiguousarray(f2),
            )
        return self._pack

    # -- queries ----------------------------------------------------------------

    def contains(self, lat: float, lon: float, alt: float, t: float) -> bool:
        def inside(axis, x):
            if axis.size == 1:
                return True
            tol = 1e-6 * max(1.0, abs(axis[-1] - axis[0]))
            return axis[0] - tol <= x <= axis[-1] + tol

        return (
            inside(self.lat_axis, lat)
            and inside(self.lon_axis, lon)
            and inside(self.alt_axis, alt)
            and inside(self.time_axis, t)
        )

    def bounds(self) -> dict:
        return {
            "lat": (float(self.lat_axis[0]), float(self.lat_axis[-1])),
            "lon": (float(self.lon_axis[0]), float(self.lon_axis[-1])),
            "alt": (float(self.alt_axis[0]), float(self.alt_axis[-1])),
            "time": (float(self.time_axis[0]), float(self.time_axis[-1])),
        }

    def _raise_domain(self, status: int, lat, lon, alt, t):
        axis = _DOMAIN_AXES[status]
        axes = {
            "time": (self.time_axis, t),
            "lat": (self.lat_axis, lat),
            "lon": (self.lon_axis, lon),
            "alt": (self.alt_axis, alt),
        }
        arr, val = axes[axis]
        raise DomainError(axis, float(val), float(arr[0]), float(arr[-1]))


def interpolate(grid: WeatherGrid, point, t: float) -> WeatherSample:
    """Weather at a GeoPoint and unix time; raises DomainError outside the grid."""
    wt, wa, wla, wlo, _steps, f3, f2 = grid.pack()
    out = np.zeros(K.N_SAMPLE)
    status = K.sample_weather(
        wt, wa, wla, wlo, f3, f2, point.lat, point.lon, point.alt_msl, float(t), out
    )
    if status != K.ST_OK:
        grid._raise_domain(status, point.lat, point.lon, point.alt_msl, t)
    return WeatherSample.from_vector(out)


# -- container I/O ---------------------------------------------------------------


def save_weather(path: str | Path, grid: WeatherGrid) -> None:
    axes = {
        "time": grid.time_axis,
        "alt": grid.alt_axis,
        "lat": grid.lat_axis,
        "lon": grid.lon_axis,
    }
    fields = []
    arrays = {}
    for name in FIELDS_3D:
        fields.append(
            FieldSpec(name=name, units=_UNITS[name], dims=("time", "alt", "lat", "lon"))
        )
        arrays[name] = grid.fields3d[name]
    for name in FIELDS_2D:
        fields.append(
            FieldSpec(
                name=name,
                units=_UNITS[name],
                dims=("time", "lat", "lon"),
                accumulation_step_s=(
                    grid.accumulation_step_s if name in ACCUMULATED else None
                ),
            )
        )
        arrays[name] = grid.fields2d[name]
    save_container(path, axes, fields, arrays, meta=grid.meta)


def load_weather(path: str | Path) -> WeatherGrid:
    axes, fields, arrays, meta = load_container(path)
    for ax in ("time", "alt", "lat", "lon"):
        if ax not in axes:
            raise HwxFormatError(f"{path}: weather container missing '{ax}' axis")
    by_name = {s.name: s for s in fields}
    missing = [n for n in FIELDS_3D + FIELDS_2D if n not in by_name]
    if missing:
        raise HwxFormatError(f"{path}: missing fields {missing}")
    accum = None
    for n in ACCUMULATED:
        if by_name[n].accumulation_step_s is not None:
            accum = float(by_name[n].accumulation_step_s)
            break
    if accum is None:
        t = axes["time"]
        accum = float(t[1] - t[0]) if t.size > 1 else 3600.0
    grid = WeatherGrid(
        time_axis=axes["time"],
        alt_axis=axes["alt"],
        lat_axis=axes["lat"],
        lon_axis=axes["lon"],
        fields3d={n: arrays[n] for n in FIELDS_3D},
        fields2d={n: arrays[n] for n in FIELDS_2D},
        accumulation_step_s=accum,
        meta=meta,
    )
    try:
        grid.validate()
    except WeatherValidationError as exc:
        raise WeatherValidationError(f"{path}: {exc}") from exc
    return grid
