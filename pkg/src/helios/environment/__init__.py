from .atmosphere import air_density
from .errors import (
    DomainError,
    HwxFormatError,
    SyntheticSpecError,
    WeatherValidationError,
)
from .grid import (
    WeatherGrid,
    WeatherSample,
    interpolate,
    load_weather,
    save_weather,
)
from .solar import SunPosition, clear_sky_irradiance, sun_position
from .synth import calm_clear_sky_spec, synth_weather
from .terrain import Dem, flat_dem, load_dem, save_dem, terrain_elevation

__all__ = [
    "Dem",
    "DomainError",
    "HwxFormatError",
    "SunPosition",
    "SyntheticSpecError",
    "WeatherGrid",
    "WeatherSample",
    "WeatherValidationError",
    "air_density",
    "calm_clear_sky_spec",
    "clear_sky_irradiance",
    "flat_dem",
    "interpolate",
    "load_dem",
    "load_weather",
    "save_dem",
    "save_weather",
    "sun_position",
    "synth_weather",
    "terrain_elevation",
]
