import calendar

import numpy as np
import pytest

from helios import kernels as K
from helios.environment import (
    Dem,
    DomainError,
    SyntheticSpecError,
    load_dem,
    save_dem,
    save_weather,
    synth_weather,
    terrain_elevation,
)
from helios.geo import GeoPoint

T0 = calendar.timegm((2015, 6, 10, 0, 0, 0))


def small_dem():
    return Dem(
        lat_axis=np.array([46.0, 46.1, 46.2]),
        lon_axis=np.array([7.0, 7.1]),
        elevation=np.array(
            [[0.0, 0.0], [100.0, 100.0], [400.0, -9999.0]], dtype=np.float32
        ),
    )


def test_dem_node_identity_and_flat():
    dem = small_dem()
    assert terrain_elevation(dem, GeoPoint(46.1, 7.0, 0.0)) == pytest.approx(100.0)
    flat = Dem(
        lat_axis=np.array([45.0, 50.0]),
        lon_axis=np.array([5.0, 10.0]),
        elevation=np.full((2, 2), 500.0, dtype=np.float32),
    )
    for lat, lon in [(45.0, 5.0), (47.5, 7.5), (49.9, 9.9)]:
        assert terrain_elevation(flat, GeoPoint(lat, lon, 0.0)) == pytest.approx(500.0)


def test_dem_bilinear_midpoint():
    dem = Dem(
        lat_axis=np.array([0.0, 1.0]),
        lon_axis=np.array([0.0, 1.0]),
        elevation=np.array([[0.0, 0.0], [100.0, 100.0]], dtype=np.float32),
    )
    assert terrain_elevation(dem, GeoPoint(0.5, 0.5, 0.0)) == pytest.approx(50.0)


def test_dem_nodata_reads_zero_and_bounds():
    dem = small_dem()
    assert terrain_elevation(dem, GeoPoint(46.2, 7.1, 0.0)) == 0.0
    with pytest.raises(DomainError):
        terrain_elevation(dem, GeoPoint(45.0, 7.0, 0.0))


def test_dem_roundtrip(tmp_path):
    dem = small_dem()
    path = tmp_path / "dem.hwx"
    save_dem(path, dem)
    loaded = load_dem(path)
    assert np.array_equal(loaded.elevation, dem.elevation)
    assert loaded.nodata == dem.nodata


def base_spec(layers, seed=0, hours=24.0):
    return {
        "lat": {"start": 46.0, "stop": 48.0, "n": 5},
        "lon": {"start": 7.0, "stop": 10.0, "n": 7},
        "altitudes": [500.0],
        "time": {"start": T0, "hours": hours, "step_s": 3600.0},
        "seed": seed,
        "layers": layers,
    }


def test_calm_clear_sky_matches_model():
    grid = synth_weather(base_spec([{"kind": "clear_sky"}]))
    assert float(np.abs(grid.fields3d["wind_east"]).max()) == 0.0
    assert float(grid.fields2d["cape"].max()) == 0.0
    assert float(grid.fields2d["precipitation"].max()) == 0.0
    # stored accumulation matches quadrature of the clear-sky model
    it, iy, ix = 14, 2, 3
    t_hi = float(grid.time_axis[it])
    ts = np.linspace(t_hi - 3600.0, t_hi, 9)
    vals = [
        K.clear_sky_irradiance(
            K.sun_position(float(grid.lat_axis[iy]), float(grid.lon_axis[ix]), t)[0],
            0.75,
        )
        for t in ts
    ]
    expected = np.trapezoid(vals, ts)
    assert float(grid.fields2d["radiation_total"][it, iy, ix]) == pytest.approx(
        expected, rel=1e-4, abs=0.5
    )
    assert float(grid.fields2d["radiation_direct"][it, iy, ix]) == pytest.approx(
        0.85 * expected, rel=1e-4, abs=0.5
    )


def test_uniform_wind_layer():
    grid = synth_weather(
        base_spec([{"kind": "uniform_wind", "east": 5.0, "north": -2.0}])
    )
    assert np.allclose(grid.fields3d["wind_east"], 5.0)
    assert np.allclose(grid.fields3d["wind_north"], -2.0)


def test_vortex_curl_sign():
    """Counter-clockwise vortex has positive finite-difference curl."""
    grid = synth_weather(
        base_spec(
            [
                {
                    "kind": "vortex",
                    "center_lat": 47.0,
                    "center_lon": 8.5,
                    "radius_km": 60.0,
                    "max_speed": 8.0,
                    "direction": "ccw",
                }
            ]
        )
    )
    we = grid.fields3d["wind_east"][0, 0]
    wn = grid.fields3d["wind_north"][0, 0]
    dlat_m = np.deg2rad(np.diff(grid.lat_axis).mean()) * 6371000.0
    dlon_m = (
        np.deg2rad(np.diff(grid.lon_axis).mean())
        * 6371000.0
        * np.cos(np.deg2rad(47.0))
    )
    # curl_z = d(wn)/dx - d(we)/dy, sampled inside the core
    curl = (wn[2, 4] - wn[2, 2]) / (2 * dlon_m) - (we[3, 3] - we[1, 3]) / (2 * dlat_m)
    assert curl > 0.0
    cw = synth_weather(
        base_spec(
            [
                {
                    "kind": "vortex",
                    "center_lat": 47.0,
                    "center_lon": 8.5,
                    "radius_km": 60.0,
                    "max_speed": 8.0,
                    "direction": "cw",
                }
            ]
        )
    )
    wn2 = cw.fields3d["wind_north"][0, 0]
    we2 = cw.fields3d["wind_east"][0, 0]
    curl2 = (wn2[2, 4] - wn2[2, 2]) / (2 * dlon_m) - (we2[3, 3] - we2[1, 3]) / (
        2 * dlat_m
    )
    assert curl2 < 0.0


def test_storm_blob_fields():
    grid = synth_weather(
        base_spec(
            [
                {
                    "kind": "storm",
                    "center_lat": 47.0,
                    "center_lon": 8.5,
                    "sigma_km": 40.0,
                    "cape": 2500.0,
                    "precip_mm_h": 6.0,
                    "gust": 18.0,
                }
            ]
        )
    )
    iy = int(np.argmin(np.abs(grid.lat_axis - 47.0)))
    ix = int(np.argmin(np.abs(grid.lon_axis - 8.5)))
    assert grid.fields2d["cape"][0, iy, ix] == pytest.approx(2500.0, rel=0.01)
    corner = grid.fields2d["cape"][0, 0, 0]
    assert corner < 500.0


def test_determinism_byte_identical(tmp_path):
    spec = base_spec(
        [{"kind": "random", "wind_std": 3.0, "cloud_range": [0.4, 1.0]}], seed=7
    )
    g1 = synth_weather(spec)
    g2 = synth_weather(spec)
    p1, p2 = tmp_path / "a.hwx", tmp_path / "b.hwx"
    save_weather(p1, g1)
    save_weather(p2, g2)
    assert p1.read_bytes() == p2.read_bytes()


def test_spec_errors():
    with pytest.raises(SyntheticSpecError):
        synth_weather({"lat": {"start": 0, "stop": 1}})  # lat missing step/n
    spec = base_spec([{"kind": "nope"}])
    with pytest.raises(SyntheticSpecError):
        synth_weather(spec)
    bad = base_spec([])
    bad["time"] = {"start": T0, "step_s": -5, "hours": 2}
    with pytest.raises(SyntheticSpecError):
        synth_weather(bad)
