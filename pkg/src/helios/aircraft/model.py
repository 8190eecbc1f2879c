"""Public aircraft model operations (kinematics and power balance)."""
from __future__ import annotations

from .. import kernels as K
from .params import AircraftParams


def wind_triangle(
    v_air: float, wind_east: float, wind_north: float, course: float
) -> tuple[float, float] | None:
    """Ground speed and heading to hold `course` (deg) at `v_air` in wind.

    Returns None when the course cannot be flown (crosswind exceeds v_air or
    the along-course solution is not positive).
    """
    ok, v_gnd, heading = K.wind_triangle(v_air, wind_east, wind_north, course)
    if not ok:
        return None
    return float(v_gnd), float(heading)


def level_power(params: AircraftParams, rho: float, v_air: float) -> float:
    """Level-flight electric power [W] incl. avionics/payload."""
    return float(K.level_power(params.pack(), rho, v_air))


def flight_power(
    params: AircraftParams, rho: float, v_air: float, climb_rate: float
) -> float:
    """Total flight power [W]; climb adds m*g*hdot/eta_climb, descent adds 0."""
    return float(K.flight_power(params.pack(), rho, v_air, climb_rate))


def solar_power(
    params: AircraftParams,
    irradiance_total: float,
    irradiance_direct: float,
    sun_elevation: float,
    temperature: float,
) -> float:
    """Array output power [W] for given irradiances and ambient temperature."""
    return float(
        K.solar_power(
            params.pack(), irradiance_total, irradiance_direct, sun_elevation, temperature
        )
    )


def soc_step(
    params: AircraftParams, soc: float, p_solar: float, p_flight: float, dt: float
) -> float:
    """One battery state-of-charge update over dt seconds, clamped to [0, 1]."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return float(K.soc_step(params.pack(), soc, p_solar, p_flight, dt))
