"""Sun position and clear-sky irradiance (thin wrappers over the kernels)."""
from __future__ import annotations

from dataclasses import dataclass

from .. import kernels as K

DEFAULT_TRANSMITTANCE = 0.75
DIRECT_FRACTION = 0.85


@dataclass(frozen=True)
class SunPosition:
    elevation: float  # degrees above horizon
    azimuth: float  # degrees clockwise from north


def sun_position(point, t: float) -> SunPosition:
    """Sun elevation/azimuth at a GeoPoint and unix timestamp (UTC)."""
    elev, az = K.sun_position(point.lat, point.lon, float(t))
    return SunPosition(elevation=float(elev), azimuth=float(az))


def clear_sky_irradiance(
    point, t: float, transmittance: float = DEFAULT_TRANSMITTANCE
) -> float:
    """Clear-sky global irradiance [W/m2]; zero when the sun is down."""
    elev, _ = K.sun_position(point.lat, point.lon, float(t))
    return float(K.clear_sky_irradiance(elev, transmittance))
