"""Digital elevation model: container I/O and bilinear lookup."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import kernels as K
from .errors import DomainError, HwxFormatError
from .hwx import FieldSpec, load_container, save_container

DEFAULT_NODATA = -9999.0


@dataclass
class Dem:
    lat_axis: np.ndarray
    lon_axis: np.ndarray
    elevation: np.ndarray  # [lat, lon], metres MSL
    nodata: float = DEFAULT_NODATA
    _filled: np.ndarray | None = field(default=None, repr=False, compare=False)

    def validate(self) -> None:
        if self.lat_axis.size > 1 and not np.all(np.diff(self.lat_axis) > 0):
            raise HwxFormatError("DEM lat axis not strictly increasing")
        if self.lon_axis.size > 1 and not np.all(np.diff(self.lon_axis) > 0):
            raise HwxFormatError("DEM lon axis not strictly increasing")
        if self.elevation.shape != (self.lat_axis.size, self.lon_axis.size):
            raise HwxFormatError(
                f"DEM elevation shape {self.elevation.shape} != "
                f"({self.lat_axis.size}, {self.lon_axis.size})"
            )
        valid = self.elevation != self.nodata
        if not np.all(np.isfinite(self.elevation[valid])):
            raise HwxFormatError("DEM contains non-finite elevations")

    def filled(self) -> np.ndarray:
        """Elevation with nodata cells read as 0 m (open sea)."""
        if self._filled is None:
            arr = self.elevation.astype(np.float64)
            arr[self.elevation == self.nodata] = 0.0
            self._filled = np.ascontiguousarray(arr)
        return self._filled

    def pack(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (
            np.ascontiguousarray(self.lat_axis, dtype=np.float64),
            np.ascontiguousarray(self.lon_axis, dtype=np.float64),
            self.filled(),
        )

    def contains(self, lat: float, lon: float) -> bool:
        def inside(axis, x):
            if axis.size == 1:
                return True
            tol = 1e-6 * max(1.0, abs(axis[-1] - axis[0]))
            return axis[0] - tol <= x <= axis[-1] + tol

        return inside(self.lat_axis, lat) and inside(self.lon_axis, lon)


def flat_dem(elevation_m: float = 0.0) -> Dem:
    """A one-cell DEM: the whole world at a constant elevation."""
    return Dem(
        lat_axis=np.array([0.0]),
        lon_axis=np.array([0.0]),
        elevation=np.array([[elevation_m]], dtype=np.float32),
    )


def terrain_elevation(dem: Dem, point) -> float:
    """Bilinear terrain elevation at a GeoPoint; nodata reads as 0 m."""
    dlat, dlon, delev = dem.pack()
    status, value = K.interp_dem(dlat, dlon, delev, point.lat, point.lon)
    if status != K.ST_OK:
        if status == K.ST_DOMAIN_LAT:
            raise DomainError(
                "lat", point.lat, float(dem.lat_axis[0]), float(dem.lat_axis[-1])
            )
        raise DomainError(
            "lon", point.lon, float(dem.lon_axis[0]), float(dem.lon_axis[-1])
        )
    return float(value)


def save_dem(path: str | Path, dem: Dem) -> None:
    save_container(
        path,
        axes={"lat": dem.lat_axis, "lon": dem.lon_axis},
        fields=[
            FieldSpec(name="elevation", units="m", dims=("lat", "lon"), nodata=dem.nodata)
        ],
        arrays={"elevation": dem.elevation},
    )


def load_dem(path: str | Path) -> Dem:
    axes, fields, arrays, _meta = load_container(path)
    if "lat" not in axes or "lon" not in axes:
        raise HwxFormatError(f"{path}: DEM container missing lat/lon axes")
    spec = next((s for s in fields if s.name == "elevation"), None)
    if spec is None:
        raise HwxFormatError(f"{path}: DEM container missing 'elevation' field")
    dem = Dem(
        lat_axis=axes["lat"],
        lon_axis=axes["lon"],
        elevation=arrays["elevation"],
        nodata=spec.nodata if spec.nodata is not None else DEFAULT_NODATA,
    )
    dem.validate()
    return dem
