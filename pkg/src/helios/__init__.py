"""Weather-aware mission planning for solar-powered fixed-wing UAVs."""

__version__ = "0.1.0"

from .geo import GeoPoint  # noqa: F401
