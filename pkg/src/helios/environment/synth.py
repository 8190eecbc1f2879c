"""Deterministic synthetic weather generation for tests and studies.

A spec (JSON-friendly dict) declares the grid extent/resolution plus a list
of layers stacked onto a calm baseline.  The same spec and seed always
produce an identical grid.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from ..geo import EARTH_RADIUS_M
from .errors import SyntheticSpecError
from .grid import WeatherGrid
from .solar import DEFAULT_TRANSMITTANCE, DIRECT_FRACTION

_D2R = math.pi / 180.0


def _axis_from(spec: dict, name: str) -> np.ndarray:
    d = spec.get(name)
    if d is None:
        raise SyntheticSpecError(f"missing '{name}' extent")
    if isinstance(d, (list, tuple)):
        arr = np.asarray(d, dtype=np.float64)
    else:
        try:
            start, stop = float(d["start"]), float(d["stop"])
        except KeyError as exc:
            raise SyntheticSpecError(f"'{name}' needs start/stop") from exc
        if "step" in d:
            step = float(d["step"])
            if step <= 0 or stop < start:
                raise SyntheticSpecError(f"'{name}' step/extent inconsistent")
            n = int(round((stop - start) / step)) + 1
            arr = start + step * np.arange(n)
        elif "n" in d:
            n = int(d["n"])
            if n < 1:
                raise SyntheticSpecError(f"'{name}' n must be >= 1")
            arr = np.linspace(start, stop, n)
        else:
            raise SyntheticSpecError(f"'{name}' needs step or n")
    if arr.size > 1 and not np.all(np.diff(arr) > 0):
        raise SyntheticSpecError(f"'{name}' axis not strictly increasing")
    return arr


def _time_axis(spec: dict) -> tuple[np.ndarray, float]:
    d = spec.get("time")
    if d is None:
        raise SyntheticSpecError("missing 'time' extent")
    start = float(d["start"])
    step = float(d.get("step_s", 3600.0))
    if step <= 0:
        raise SyntheticSpecError("time step_s must be positive")
    if "hours" in d:
        n = int(round(float(d["hours"]) * 3600.0 / step)) + 1
    elif "n" in d:
        n = int(d["n"])
    else:
        raise SyntheticSpecError("'time' needs hours or n")
    if n < 1:
        raise SyntheticSpecError("time axis must have at least one node")
    return start + step * np.arange(n), step


def _gauss_weight(lat, lon, center_lat, center_lon, sigma_km):
    """Gaussian bump around a centre, computed on the local tangent plane."""
    dn = (lat - center_lat) * _D2R * EARTH_RADIUS_M
    de = (lon - center_lon) * _D2R * EARTH_RADIUS_M * math.cos(center_lat * _D2R)
    r2 = dn * dn + de * de
    s = sigma_km * 1000.0
    return np.exp(-r2 / (2.0 * s * s))


def _sun_elevation_np(lat2: np.ndarray, lon2: np.ndarray, t: float) -> np.ndarray:
    """Vectorized twin of kernels.sun_position (elevation only)."""
    d = t / 86400.0 - 10957.5
    g = math.radians((357.529 + 0.98560028 * d) % 360.0)
    q = (280.459 + 0.98564736 * d) % 360.0
    lam = math.radians(q + 1.915 * math.sin(g) + 0.020 * math.sin(2.0 * g))
    eps = math.radians(23.439 - 0.00000036 * d)
    sin_dec = math.sin(eps) * math.sin(lam)
    dec = math.asin(sin_dec)
    gmst_h = (18.697374558 + 24.06570982441908 * d) % 24.0
    ra_deg = math.degrees(math.atan2(math.cos(eps) * math.sin(lam), math.cos(lam)))
    ha = np.radians((gmst_h * 15.0 + lon2 - ra_deg) % 360.0)
    phi = np.radians(lat2)
    sin_e = np.sin(phi) * sin_dec + np.cos(phi) * math.cos(dec) * np.cos(ha)
    return np.degrees(np.arcsin(np.clip(sin_e, -1.0, 1.0)))


def _clear_sky_np(elev_deg: np.ndarray, tau: float) -> np.ndarray:
    """Vectorized twin of kernels.clear_sky_irradiance."""
    sin_e = np.sin(np.radians(np.maximum(elev_deg, 0.0)))
    airmass = 1.0 / np.maximum(sin_e, 0.05)
    i = 1361.0 * (tau ** (airmass**0.678)) * sin_e
    return np.where(elev_deg <= 0.0, 0.0, i)


def synth_weather(spec: dict | str | Path) -> WeatherGrid:
    """Generate a WeatherGrid from a synthetic spec (dict, JSON text or path)."""
    if isinstance(spec, (str, Path)):
        p = Path(spec)
        spec = json.loads(p.read_text() if p.exists() else str(spec))
    if not isinstance(spec, dict):
        raise SyntheticSpecError("spec must be a JSON object")

    lat = _axis_from(spec, "lat")
    lon = _axis_from(spec, "lon")
    alt = np.asarray(spec.get("altitudes", [500.0]), dtype=np.float64)
    if alt.size > 1 and not np.all(np.diff(alt) > 0):
        raise SyntheticSpecError("'altitudes' not strictly increasing")
    time, step_s = _time_axis(spec)
    rng = np.random.default_rng(int(spec.get("seed", 0)))

    nt, na, ny, nx = time.size, alt.size, lat.size, lon.size
    base = spec.get("base", {})
    f3 = {
        "temperature": np.full((nt, na, ny, nx), float(base.get("temperature", 15.0))),
        "relative_humidity": np.full(
            (nt, na, ny, nx), float(base.get("humidity", 50.0))
        ),
        "wind_east": np.zeros((nt, na, ny, nx)),
        "wind_north": np.zeros((nt, na, ny, nx)),
    }
    f2 = {
        "gust": np.zeros((nt, ny, nx)),
        "precipitation": np.zeros((nt, ny, nx)),
        "cape": np.zeros((nt, ny, nx)),
        "radiation_total": np.zeros((nt, ny, nx)),
        "radiation_direct": np.zeros((nt, ny, nx)),
    }

    lon2, lat2 = np.meshgrid(lon, lat)  # [ny, nx]

    for layer in spec.get("layers", []):
        kind = layer.get("kind")
        if kind == "uniform_wind":
            f3["wind_east"] += float(layer.get("east", 0.0))
            f3["wind_north"] += float(layer.get("north", 0.0))

        elif kind == "vortex":
            clat = float(layer["center_lat"])
            clon = float(layer["center_lon"])
            radius_m = float(layer.get("radius_km", 50.0)) * 1000.0
            vmax = float(layer.get("max_speed", 10.0))
            sign = -1.0 if layer.get("direction", "ccw") == "cw" else 1.0
            dn = (lat2 - clat) * _D2R * EARTH_RADIUS_M
            de = (lon2 - clon) * _D2R * EARTH_RADIUS_M * math.cos(clat * _D2R)
            r = np.hypot(de, dn)
            rs = np.where(r < 1e-6, 1e-6, r)
            # Rankine vortex: solid-body core, 1/r decay outside
            vt = np.where(r <= radius_m, vmax * r / radius_m, vmax * radius_m / rs)
            we = sign * (-dn / rs) * vt
            wn = sign * (de / rs) * vt
            f3["wind_east"] += we[None, None, :, :]
            f3["wind_north"] += wn[None, None, :, :]

        elif kind == "clear_sky":
            tau = float(layer.get("transmittance", DEFAULT_TRANSMITTANCE))
            dfrac = float(layer.get("direct_fraction", DIRECT_FRACTION))
            nsub = int(layer.get("subsamples", 8))
            total = np.zeros((nt, ny, nx))
            for it in range(nt):
                t1 = time[it]
                t0 = t1 - (time[it] - time[it - 1] if it > 0 else step_s)
                ts = np.linspace(t0, t1, nsub + 1)
                vals = np.stack(
                    [_clear_sky_np(_sun_elevation_np(lat2, lon2, t), tau) for t in ts]
                )
                total[it] = np.trapezoid(vals, ts, axis=0)
            f2["radiation_total"] += total
            f2["radiation_direct"] += total * dfrac

        elif kind == "storm":
            w = _gauss_weight(
                lat2,
                lon2,
                float(layer["center_lat"]),
                float(layer["center_lon"]),
                float(layer.get("sigma_km", 30.0)),
            )
            t0 = float(layer.get("t_start", time[0]))
            t1 = float(layer.get("t_end", time[-1]))
            active = ((time >= t0) & (time <= t1)).astype(np.float64)
            wt = active[:, None, None] * w[None, :, :]
            f2["cape"] += float(layer.get("cape", 1500.0)) * wt
            f2["precipitation"] += (
                float(layer.get("precip_mm_h", 5.0)) * step_s / 3600.0 * wt
            )
            f2["gust"] += float(layer.get("gust", 12.0)) * wt
            ws = float(layer.get("wind", 0.0))
            if ws:
                f3["wind_east"] += ws * wt[:, None, :, :]

        elif kind == "clouds":
            factor = float(layer.get("factor", 0.5))
            if "center_lat" in layer:
                w = _gauss_weight(
                    lat2,
                    lon2,
                    float(layer["center_lat"]),
                    float(layer["center_lon"]),
                    float(layer.get("sigma_km", 50.0)),
                )
                eff = 1.0 - (1.0 - factor) * w
            else:
                eff = np.full((ny, nx), factor)
            f2["radiation_total"] *= eff[None, :, :]
            f2["radiation_direct"] *= eff[None, :, :]

        elif kind == "random":
            shape3 = (1 if layer.get("time_invariant") else nt, na, ny, nx)
            shape2 = (1 if layer.get("time_invariant") else nt, ny, nx)

            def _tile3(a):
                return np.broadcast_to(a, (nt, na, ny, nx)).copy() if a.shape[0] == 1 else a

            def _tile2(a):
                return np.broadcast_to(a, (nt, ny, nx)).copy() if a.shape[0] == 1 else a

            wstd = float(layer.get("wind_std", 0.0))
            if wstd:
                f3["wind_east"] += _tile3(rng.normal(0.0, wstd, shape3))
                f3["wind_north"] += _tile3(rng.normal(0.0, wstd, shape3))
            if "cloud_range" in layer:
                lo, hi = (float(v) for v in layer["cloud_range"])
                eff = _tile2(rng.uniform(lo, hi, shape2))
                f2["radiation_total"] *= eff
                f2["radiation_direct"] *= eff
            if "humidity_range" in layer:
                lo, hi = (float(v) for v in layer["humidity_range"])
                f3["relative_humidity"] = _tile3(rng.uniform(lo, hi, shape3))
            if "cape_max" in layer:
                f2["cape"] += _tile2(rng.uniform(0.0, float(layer["cape_max"]), shape2))
            if "gust_max" in layer:
                f2["gust"] += _tile2(rng.uniform(0.0, float(layer["gust_max"]), shape2))
            if "precip_max_mm_h" in layer:
                rate = _tile2(
                    rng.uniform(0.0, float(layer["precip_max_mm_h"]), shape2)
                )
                f2["precipitation"] += rate * step_s / 3600.0

        else:
            raise SyntheticSpecError(f"unknown layer kind {kind!r}")

    grid = WeatherGrid(
        time_axis=time,
        alt_axis=alt,
        lat_axis=lat,
        lon_axis=lon,
        fields3d={k: v.astype(np.float32) for k, v in f3.items()},
        fields2d={k: v.astype(np.float32) for k, v in f2.items()},
        accumulation_step_s=step_s,
        meta={"synthetic": True, "seed": int(spec.get("seed", 0))},
    )
    grid.validate()
    return grid


def calm_clear_sky_spec(
    lat0: float,
    lat1: float,
    lon0: float,
    lon1: float,
    t_start: float,
    hours: float,
    step_s: float = 3600.0,
    n_lat: int = 9,
    n_lon: int = 17,
    altitudes=(500.0,),
    seed: int = 0,
) -> dict:
    """Spec helper: windless grid with clear-sky radiation (unit-test weather)."""
    return {
        "lat": {"start": lat0, "stop": lat1, "n": n_lat},
        "lon": {"start": lon0, "stop": lon1, "n": n_lon},
        "altitudes": list(altitudes),
        "time": {"start": t_start, "hours": hours, "step_s": step_s},
        "seed": seed,
        "layers": [{"kind": "clear_sky"}],
    }
