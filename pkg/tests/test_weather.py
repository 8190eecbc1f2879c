import calendar

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helios.environment import (
    DomainError,
    WeatherValidationError,
    interpolate,
    load_weather,
    save_weather,
    synth_weather,
)
from helios.environment.grid import FIELDS_2D, FIELDS_3D, WeatherGrid
from helios.geo import GeoPoint

T0 = calendar.timegm((2015, 6, 1, 0, 0, 0))


def tiny_grid(nt=2, na=2, ny=2, nx=2, step=3600.0, seed=0) -> WeatherGrid:
    rng = np.random.default_rng(seed)
    grid = WeatherGrid(
        time_axis=T0 + step * np.arange(nt),
        alt_axis=200.0 + 300.0 * np.arange(na),
        lat_axis=47.0 + 0.5 * np.arange(ny),
        lon_axis=8.0 + 0.5 * np.arange(nx),
        fields3d={
            "temperature": rng.uniform(0, 25, (nt, na, ny, nx)).astype(np.float32),
            "relative_humidity": rng.uniform(10, 90, (nt, na, ny, nx)).astype(
                np.float32
            ),
            "wind_east": rng.uniform(-8, 8, (nt, na, ny, nx)).astype(np.float32),
            "wind_north": rng.uniform(-8, 8, (nt, na, ny, nx)).astype(np.float32),
        },
        fields2d={
            "gust": rng.uniform(0, 10, (nt, ny, nx)).astype(np.float32),
            "precipitation": rng.uniform(0, 2, (nt, ny, nx)).astype(np.float32),
            "cape": rng.uniform(0, 500, (nt, ny, nx)).astype(np.float32),
            "radiation_total": rng.uniform(1e5, 2e6, (nt, ny, nx)).astype(np.float32),
            "radiation_direct": np.zeros((nt, ny, nx), np.float32),
        },
        accumulation_step_s=step,
    )
    grid.fields2d["radiation_direct"] = (
        0.85 * grid.fields2d["radiation_total"]
    ).astype(np.float32)
    grid.validate()
    return grid


def test_roundtrip_identity(tmp_path):
    grid = tiny_grid()
    path = tmp_path / "w.hwx"
    save_weather(path, grid)
    loaded = load_weather(path)
    assert np.array_equal(loaded.time_axis, grid.time_axis)
    assert np.array_equal(loaded.alt_axis, grid.alt_axis)
    assert np.array_equal(loaded.lat_axis, grid.lat_axis)
    assert np.array_equal(loaded.lon_axis, grid.lon_axis)
    for name in FIELDS_3D:
        assert np.array_equal(loaded.fields3d[name], grid.fields3d[name])
    for name in FIELDS_2D:
        assert np.array_equal(loaded.fields2d[name], grid.fields2d[name])
    assert loaded.accumulation_step_s == grid.accumulation_step_s
    # second save is byte-identical
    path2 = tmp_path / "w2.hwx"
    save_weather(path2, loaded)
    assert path.read_bytes() == path2.read_bytes()


def test_validation_rejects_bad_humidity(tmp_path):
    grid = tiny_grid()
    grid.fields3d["relative_humidity"][0, 0, 0, 0] = 150.0
    path = tmp_path / "bad.hwx"
    save_weather(path, grid)
    with pytest.raises(WeatherValidationError, match="relative_humidity"):
        load_weather(path)


def test_validation_rejects_direct_over_total(tmp_path):
    grid = tiny_grid()
    grid.fields2d["radiation_direct"] = grid.fields2d["radiation_total"] * 2.0
    path = tmp_path / "bad.hwx"
    save_weather(path, grid)
    with pytest.raises(WeatherValidationError, match="radiation_direct"):
        load_weather(path)


def test_atlantic_scale_header(tmp_path):
    # 40 x 113 points at 0.125 deg, 6 h steps
    spec = {
        "lat": {"start": 38.0, "stop": 38.0 + 0.125 * 39, "step": 0.125},
        "lon": {"start": -52.0, "stop": -52.0 + 0.125 * 112, "step": 0.125},
        "altitudes": [100.0, 850.0, 1600.0],
        "time": {"start": T0, "hours": 48, "step_s": 21600.0},
        "layers": [],
    }
    grid = synth_weather(spec)
    assert grid.lat_axis.size == 40
    assert grid.lon_axis.size == 113
    path = tmp_path / "atl.hwx"
    save_weather(path, grid)
    loaded = load_weather(path)
    assert np.allclose(np.diff(loaded.lat_axis), 0.125)
    assert np.allclose(np.diff(loaded.lon_axis), 0.125)
    assert loaded.accumulation_step_s == 21600.0


def test_interpolation_identity_at_nodes():
    grid = tiny_grid()
    for it, t in enumerate(grid.time_axis):
        p = GeoPoint(float(grid.lat_axis[1]), float(grid.lon_axis[0]), float(grid.alt_axis[1]))
        s = interpolate(grid, p, float(t))
        assert s.temperature == pytest.approx(
            float(grid.fields3d["temperature"][it, 1, 1, 0]), abs=1e-5
        )
        assert s.gust == pytest.approx(float(grid.fields2d["gust"][it, 1, 0]), abs=1e-5)


def test_time_midpoint_linear():
    grid = tiny_grid()
    grid.fields3d["wind_east"][:] = 0.0
    grid.fields3d["wind_east"][0] = 4.0
    grid.fields3d["wind_east"][1] = 8.0
    grid._pack = None
    p = GeoPoint(47.2, 8.3, 400.0)
    s = interpolate(grid, p, float(grid.time_axis[0] + 1800.0))
    assert s.wind_east == pytest.approx(6.0, abs=1e-6)


def test_constant_field_oracle():
    grid = tiny_grid()
    for name in grid.fields3d:
        grid.fields3d[name][:] = 7.5
    for name in grid.fields2d:
        grid.fields2d[name][:] = 1800.0  # 0.5 mm-equivalent per second fields
    grid.fields3d["relative_humidity"][:] = 55.0
    grid._pack = None
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = GeoPoint(
            rng.uniform(47.0, 47.5), rng.uniform(8.0, 8.5), rng.uniform(200, 500)
        )
        t = rng.uniform(grid.time_axis[0], grid.time_axis[-1])
        s = interpolate(grid, p, float(t))
        assert s.temperature == pytest.approx(7.5, rel=1e-6)
        assert s.humidity == pytest.approx(55.0, rel=1e-6)
        assert s.cape == pytest.approx(1800.0, rel=1e-6)
        # accumulated 1800 mm per 3600 s step -> 1800 mm/h at any query time
        assert s.precip_rate == pytest.approx(1800.0, rel=1e-6)


def test_interpolation_bounded_by_nodes():
    grid = tiny_grid(seed=11)
    rng = np.random.default_rng(5)
    temps = grid.fields3d["temperature"]
    for _ in range(100):
        p = GeoPoint(
            rng.uniform(47.0, 47.5), rng.uniform(8.0, 8.5), rng.uniform(200, 500)
        )
        t = rng.uniform(grid.time_axis[0], grid.time_axis[-1])
        s = interpolate(grid, p, float(t))
        assert temps.min() - 1e-6 <= s.temperature <= temps.max() + 1e-6


def test_accumulation_rate_conservation():
    """Integrating the rate over a source step recovers the accumulation."""
    grid = tiny_grid(nt=4, seed=9)
    p = GeoPoint(float(grid.lat_axis[0]), float(grid.lon_axis[0]), 200.0)
    for it in range(1, 4):
        t_lo = float(grid.time_axis[it - 1])
        t_hi = float(grid.time_axis[it])
        n = 200
        ts = np.linspace(t_lo + 1e-3, t_hi, n)
        rates = np.array([interpolate(grid, p, float(t)).precip_rate for t in ts])
        # piecewise-constant in time: integral = rate * step
        integral_mm = rates.mean() * (t_hi - t_lo) / 3600.0
        stored = float(grid.fields2d["precipitation"][it, 0, 0])
        assert integral_mm == pytest.approx(stored, rel=1e-9)


def test_domain_errors_carry_axis():
    grid = tiny_grid()
    p = GeoPoint(47.2, 8.2, 400.0)
    with pytest.raises(DomainError) as exc:
        interpolate(grid, p, float(grid.time_axis[-1]) + 7200.0)
    assert exc.value.axis == "time"
    with pytest.raises(DomainError) as exc:
        interpolate(grid, GeoPoint(40.0, 8.2, 400.0), float(grid.time_axis[0]))
    assert exc.value.axis == "lat"
    with pytest.raises(DomainError) as exc:
        interpolate(grid, GeoPoint(47.2, 8.2, 5000.0), float(grid.time_axis[0]))
    assert exc.value.axis == "alt"
