import calendar

import pytest

from helios.aircraft import Environment, load_aircraft
from helios.cost import CostParams, CostTermParams, load_cost_params
from helios.environment import synth_weather
from helios.geo import GeoPoint

# June evening UTC; mid-European fixtures built around (47 N, 8 E)
T_SUMMER_EVENING = calendar.timegm((2015, 6, 14, 20, 0, 0))
T_SUMMER_MORNING = calendar.timegm((2015, 6, 14, 8, 0, 0))
T_WINTER_NIGHT = calendar.timegm((2015, 12, 14, 22, 0, 0))


def calm_spec(t0, hours=40.0, step_s=3600.0, altitudes=(400.0, 800.0)):
    return {
        "lat": {"start": 45.0, "stop": 50.0, "n": 6},
        "lon": {"start": 5.0, "stop": 12.0, "n": 8},
        "altitudes": list(altitudes),
        "time": {"start": t0, "hours": hours, "step_s": step_s},
        "layers": [],
    }


@pytest.fixture(scope="session")
def calm_night_env():
    """Windless dark grid starting in the evening (no solar income)."""
    wx = synth_weather(calm_spec(T_SUMMER_EVENING - 3600, hours=40))
    return Environment(weather=wx)


@pytest.fixture(scope="session")
def clear_sky_env():
    """Windless grid with clear-sky radiation over 84 h."""
    spec = calm_spec(T_SUMMER_MORNING - 3600, hours=84, altitudes=(400.0, 600.0, 800.0))
    spec["layers"] = [{"kind": "clear_sky"}]
    return Environment(weather=synth_weather(spec))


@pytest.fixture(scope="session")
def winter_night_env():
    """Calm dark grid: winter evening through the night (no dawn inside)."""
    wx = synth_weather(calm_spec(T_WINTER_NIGHT - 4 * 3600, hours=16))
    return Environment(weather=wx)


@pytest.fixture(scope="session")
def as1():
    return load_aircraft("as1")


@pytest.fixture(scope="session")
def as2():
    return load_aircraft("as2")


@pytest.fixture(scope="session")
def as3():
    return load_aircraft("as3")


@pytest.fixture(scope="session")
def cp_81h():
    return load_cost_params("81h")


@pytest.fixture(scope="session")
def cp_atlantic():
    return load_cost_params("atlantic")


@pytest.fixture(scope="session")
def cp_arctic():
    return load_cost_params("arctic")


@pytest.fixture(scope="session")
def cp_time_only():
    return CostParams(c_time=0.01, terms={})


def risk_cost_params(c_time=0.05) -> CostParams:
    """Position-dependent risk terms only (no SoC term): the configuration
    under which single-label DP is provably exact on time-invariant weather."""
    return CostParams(
        c_time=c_time,
        terms={
            "wind": CostTermParams(3.0, 14.0, 3.0),
            "gust": CostTermParams(5.0, 18.0, 3.0),
            "precipitation": CostTermParams(0.1, 12.0, 3.0),
            "humidity": CostTermParams(70.0, 101.0, 5.0),
            "cape": CostTermParams(100.0, 3000.0, 3.0),
            "excess_power": CostTermParams(0.0, 200.0, 1.0),
        },
    )


def random_night_weather(seed: int, time_invariant=True, hours=30.0, wind_std=2.0):
    """High-variance random fields in a dark (winter-night) window."""
    spec = {
        "lat": {"start": 46.0, "stop": 49.0, "n": 7},
        "lon": {"start": 6.0, "stop": 11.0, "n": 9},
        "altitudes": [400.0, 800.0],
        "time": {"start": T_WINTER_NIGHT - 3600, "hours": hours, "step_s": 3600.0},
        "seed": seed,
        "layers": [
            {
                "kind": "random",
                "time_invariant": bool(time_invariant),
                "wind_std": wind_std,
                "humidity_range": [40.0, 95.0],
                "cape_max": 900.0,
                "gust_max": 9.0,
                "precip_max_mm_h": 3.0,
            }
        ],
    }
    return synth_weather(spec)


@pytest.fixture(scope="session")
def rafz_point():
    return GeoPoint(47.55, 8.54, 600.0)
