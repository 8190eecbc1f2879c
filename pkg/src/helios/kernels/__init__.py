from ._dispatch import USE_NUMBA
from .core import (  # noqa: F401
    AP_A_SOLAR,
    AP_C0,
    AP_C1,
    AP_C2,
    AP_E_BAT_J,
    AP_ETA_CHARGE,
    AP_ETA_CLIMB,
    AP_ETA_MPPT,
    AP_ETA_SM,
    AP_H_MAX,
    AP_H_MIN,
    AP_M_TOT,
    AP_P_AVPLD,
    AP_RHO0,
    AP_SOC_KNEE,
    AP_T_DERATE,
    AP_T_IRR,
    AP_T_REF,
    AP_TILT,
    AP_V_MAX,
    AP_V_MIN,
    AP_V_OPT,
    CF_ALLOW_SPEEDUP,
    CF_CS_TAU,
    CF_DT,
    CF_FIXED_VAIR,
    CF_HOLD,
    CF_MAX_CLIMB_TAN,
    CF_RAD_MODE,
    CF_SOC_FULL_EPS,
    CF_VGND_FLOOR,
    CF_WIND_MODE,
    CF_WIND_TAIL,
    N_AP,
    N_CF,
    N_SAMPLE,
    N_TERMS,
    N_TRACE_COLS,
    S_CAPE,
    S_GUST,
    S_HUM,
    S_IRRD,
    S_IRRT,
    S_PRECIP,
    S_TEMP,
    S_WE,
    S_WN,
    ST_CANCELLED,
    ST_CLIMB_INFEASIBLE,
    ST_DOMAIN_ALT,
    ST_DOMAIN_LAT,
    ST_DOMAIN_LON,
    ST_DOMAIN_TIME,
    ST_MAX_STEPS,
    ST_OK,
    ST_WIND_INFEASIBLE,
    TERM_AGL,
    TERM_CAPE,
    TERM_EXCESS,
    TERM_GUST,
    TERM_HUMIDITY,
    TERM_PRECIP,
    TERM_RADIATION,
    TERM_SOC,
    TERM_TIME,
    TERM_WIND,
    TR_AGL,
    TR_ALT,
    TR_EXCESS,
    TR_HEADING,
    TR_LAT,
    TR_LON,
    TR_PFLIGHT,
    TR_PSOLAR,
    TR_RADFACTOR,
    TR_RATE0,
    TR_SAMPLE0,
    TR_SOC,
    TR_TIME,
    TR_VAIR,
    TR_VGND,
    air_density,
    clear_sky_irradiance,
    interval_clear_sky,
    flight_power,
    gc_bearing,
    gc_destination,
    gc_distance,
    interp_dem,
    interp_field2,
    interp_field3,
    invert_level_power,
    level_power,
    normalized_cost,
    policy_airspeed,
    sample_weather,
    segment_kernel,
    soc_step,
    solar_power,
    sun_position,
    wind_triangle,
)

TERM_NAMES = (
    "time",
    "soc",
    "radiation_factor",
    "excess_power",
    "cape",
    "wind",
    "gust",
    "precipitation",
    "humidity",
    "altitude_agl",
)
