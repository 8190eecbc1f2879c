"""Geographic primitives: positions and great-circle (orthodrome) math.

All routines assume a spherical Earth of radius EARTH_RADIUS_M, which is
accurate to ~0.5% — well inside the weather-grid and cost-model error
budget for missions of a few thousand km.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6371000.0

_D2R = math.pi / 180.0
_R2D = 180.0 / math.pi


@dataclass(frozen=True)
class GeoPoint:
    """A position: latitude/longitude in degrees, altitude in metres MSL."""

    lat: float
    lon: float
    alt_msl: float = 0.0

    def __post_init__(self):
        if not (-90.0 <= self.lat <= 90.0):
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not (-180.0 <= self.lon < 180.0):
            # normalize once instead of rejecting; wrapped longitudes are common
            object.__setattr__(self, "lon", wrap_lon(self.lon))
        if not math.isfinite(self.alt_msl):
            raise ValueError("alt_msl must be finite")

    def with_alt(self, alt_msl: float) -> "GeoPoint":
        return GeoPoint(self.lat, self.lon, alt_msl)


def wrap_lon(lon: float) -> float:
    """Wrap a longitude into [-180, 180)."""
    return (lon + 180.0) % 360.0 - 180.0


def great_circle_distance(lat1, lon1, lat2, lon2) -> float:
    """Haversine distance in metres between two (deg, deg) points."""
    p1 = lat1 * _D2R
    p2 = lat2 * _D2R
    dp = (lat2 - lat1) * _D2R
    dl = (lon2 - lon1) * _D2R
    a = math.sin(dp / 2.0) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(a)))


def initial_bearing(lat1, lon1, lat2, lon2) -> float:
    """Initial great-circle course from point 1 to point 2, degrees from north."""
    p1 = lat1 * _D2R
    p2 = lat2 * _D2R
    dl = (lon2 - lon1) * _D2R
    y = math.sin(dl) * math.cos(p2)
    x = math.cos(p1) * math.sin(p2) - math.sin(p1) * math.cos(p2) * math.cos(dl)
    return (math.atan2(y, x) * _R2D) % 360.0


def destination_point(lat, lon, bearing_deg, distance_m) -> tuple[float, float]:
    """Point reached from (lat, lon) after distance_m along bearing_deg."""
    d = distance_m / EARTH_RADIUS_M
    b = bearing_deg * _D2R
    p1 = lat * _D2R
    l1 = lon * _D2R
    sp2 = math.sin(p1) * math.cos(d) + math.cos(p1) * math.sin(d) * math.cos(b)
    p2 = math.asin(max(-1.0, min(1.0, sp2)))
    l2 = l1 + math.atan2(
        math.sin(b) * math.sin(d) * math.cos(p1),
        math.cos(d) - math.sin(p1) * sp2,
    )
    return p2 * _R2D, wrap_lon(l2 * _R2D)


def intermediate_point(lat1, lon1, lat2, lon2, fraction: float) -> tuple[float, float]:
    """Point at the given fraction along the great circle from 1 to 2."""
    d = great_circle_distance(lat1, lon1, lat2, lon2) / EARTH_RADIUS_M
    if d == 0.0:
        return lat1, lon1
    a = math.sin((1.0 - fraction) * d) / math.sin(d)
    b = math.sin(fraction * d) / math.sin(d)
    p1, l1, p2, l2 = (v * _D2R for v in (lat1, lon1, lat2, lon2))
    x = a * math.cos(p1) * math.cos(l1) + b * math.cos(p2) * math.cos(l2)
    y = a * math.cos(p1) * math.sin(l1) + b * math.cos(p2) * math.sin(l2)
    z = a * math.sin(p1) + b * math.sin(p2)
    lat = math.atan2(z, math.hypot(x, y))
    lon = math.atan2(y, x)
    return lat * _R2D, wrap_lon(lon * _R2D)


def local_enu_offset(lat, lon, east_m, north_m) -> tuple[float, float]:
    """Offset a point by east/north metres on the local tangent plane."""
    dlat = north_m / EARTH_RADIUS_M * _R2D
    dlon = east_m / (EARTH_RADIUS_M * max(1e-9, math.cos(lat * _D2R))) * _R2D
    return lat + dlat, wrap_lon(lon + dlon)


def enu_of(lat, lon, ref_lat, ref_lon) -> tuple[float, float]:
    """(east, north) metres of a point relative to a reference point."""
    north = (lat - ref_lat) * _D2R * EARTH_RADIUS_M
    east = (wrap_lon(lon - ref_lon)) * _D2R * EARTH_RADIUS_M * math.cos(ref_lat * _D2R)
    return east, north
