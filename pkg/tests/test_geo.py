
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helios.geo import (
    GeoPoint,
    destination_point,
    great_circle_distance,
    initial_bearing,
    intermediate_point,
    wrap_lon,
)


def test_geopoint_validation():
    with pytest.raises(ValueError):
        GeoPoint(91.0, 0.0)
    with pytest.raises(ValueError):
        GeoPoint(0.0, 0.0, float("nan"))
    p = GeoPoint(10.0, 190.0)  # wrapped, not rejected
    assert p.lon == -170.0


def test_known_distance():
    # Paris -> Marseille, approx 661 km
    d = great_circle_distance(48.8566, 2.3522, 43.2965, 5.3698)
    assert d == pytest.approx(661_000, rel=0.01)


def test_equator_bearing():
    assert initial_bearing(0.0, 0.0, 0.0, 10.0) == pytest.approx(90.0)
    assert initial_bearing(0.0, 0.0, 10.0, 0.0) == pytest.approx(0.0)


@given(
    lat=st.floats(-80, 80),
    lon=st.floats(-179, 179),
    bearing=st.floats(0, 360),
    dist=st.floats(1e3, 2e6),
)
@settings(max_examples=200, deadline=None)
def test_destination_roundtrip(lat, lon, bearing, dist):
    lat2, lon2 = destination_point(lat, lon, bearing, dist)
    d = great_circle_distance(lat, lon, lat2, lon2)
    assert d == pytest.approx(dist, rel=1e-6, abs=1.0)


def test_intermediate_point_midpoint():
    lat, lon = intermediate_point(0.0, 0.0, 0.0, 90.0, 0.5)
    assert lat == pytest.approx(0.0, abs=1e-9)
    assert lon == pytest.approx(45.0, abs=1e-9)


def test_wrap_lon():
    assert wrap_lon(180.0) == -180.0
    assert wrap_lon(-180.0) == -180.0
    assert wrap_lon(359.0) == pytest.approx(-1.0)
