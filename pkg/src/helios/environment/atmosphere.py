"""ISA troposphere air density."""
from __future__ import annotations

from .. import kernels as K

TROPOSPHERE_TOP_M = 11000.0


def air_density(alt_msl: float) -> float:
    """Air density [kg/m3] at altitude [m MSL]; ISA, troposphere only."""
    if not 0.0 <= alt_msl <= TROPOSPHERE_TOP_M:
        raise ValueError(
            f"altitude {alt_msl} m outside troposphere range [0, {TROPOSPHERE_TOP_M}]"
        )
    return float(K.air_density(alt_msl))
