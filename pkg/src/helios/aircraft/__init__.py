from .model import flight_power, level_power, soc_step, solar_power, wind_triangle
from .params import (
    AircraftParams,
    fit_power_curve,
    load_aircraft,
    save_aircraft,
)
from .simulate import (
    AircraftState,
    Environment,
    PolicyContext,
    SegmentTrace,
    SimConfig,
    concat_traces,
    flight_policy,
    simulate_loiter,
    simulate_segment,
)

__all__ = [
    "AircraftParams",
    "AircraftState",
    "Environment",
    "PolicyContext",
    "SegmentTrace",
    "SimConfig",
    "concat_traces",
    "fit_power_curve",
    "flight_policy",
    "flight_power",
    "level_power",
    "load_aircraft",
    "save_aircraft",
    "simulate_loiter",
    "simulate_segment",
    "soc_step",
    "solar_power",
    "wind_triangle",
]
