"""Aircraft platform parameters and their JSON files.

The power curve C2*v^2 + C1*v + C0 (electric propulsion power at reference
density) is normally not given directly; parameter files state the total
level power at the optimal airspeed and a curvature, and the fit places the
curve minimum exactly there.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .. import kernels as K

DEFAULT_CURVATURE_W_PER_MPS2 = 3.0


def fit_power_curve(
    p_flight_opt: float,
    v_opt: float,
    p_avionics_payload: float,
    curvature: float = DEFAULT_CURVATURE_W_PER_MPS2,
) -> tuple[float, float, float]:
    """(C0, C1, C2) with the curve minimum at (v_opt, p_flight_opt - p_av_pld)."""
    c2 = curvature
    c1 = -2.0 * c2 * v_opt
    c0 = c2 * v_opt**2 + (p_flight_opt - p_avionics_payload)
    return c0, c1, c2


@dataclass
class AircraftParams:
    name: str
    m_tot: float  # kg
    m_bat: float  # kg
    e_bat: float  # Wh/kg
    eta_sm: float
    eta_mppt: float
    eta_charge: float
    eta_climb: float
    a_solar: float  # m2
    c0: float  # W
    c1: float  # W s/m
    c2: float  # W s2/m2
    p_avionics_payload: float  # W
    v_air_min: float
    v_air_opt: float
    v_air_max: float
    soc_charge_limit_knee: float = 0.9
    h_min: float = 0.0
    h_max: float = 4000.0
    rho0: float = 1.225
    panel_tilt: float = 0.0  # deg; effective sun-facing array tilt
    temp_derate: float = 0.003  # efficiency loss per degC above temp_ref
    temp_irradiance_coeff: float = 15.0  # module heating, degC per kW/m2
    temp_ref: float = 25.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for nm in ("eta_sm", "eta_mppt", "eta_charge", "eta_climb"):
            v = getattr(self, nm)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{nm}={v} outside (0, 1]")
        if not self.v_air_min <= self.v_air_opt <= self.v_air_max:
            raise ValueError("airspeed bounds must satisfy v_min <= v_opt <= v_max")
        if self.c2 <= 0.0:
            raise ValueError("c2 must be positive")
        if self.e_bat_total_wh <= 0.0:
            raise ValueError("battery energy must be positive")

    @property
    def e_bat_total_wh(self) -> float:
        return self.e_bat * self.m_bat

    def pack(self) -> np.ndarray:
        ap = np.zeros(K.N_AP)
        ap[K.AP_M_TOT] = self.m_tot
        ap[K.AP_E_BAT_J] = self.e_bat_total_wh * 3600.0
        ap[K.AP_ETA_SM] = self.eta_sm
        ap[K.AP_ETA_MPPT] = self.eta_mppt
        ap[K.AP_ETA_CHARGE] = self.eta_charge
        ap[K.AP_ETA_CLIMB] = self.eta_climb
        ap[K.AP_A_SOLAR] = self.a_solar
        ap[K.AP_C0] = self.c0
        ap[K.AP_C1] = self.c1
        ap[K.AP_C2] = self.c2
        ap[K.AP_RHO0] = self.rho0
        ap[K.AP_P_AVPLD] = self.p_avionics_payload
        ap[K.AP_V_MIN] = self.v_air_min
        ap[K.AP_V_OPT] = self.v_air_opt
        ap[K.AP_V_MAX] = self.v_air_max
        ap[K.AP_SOC_KNEE] = self.soc_charge_limit_knee
        ap[K.AP_H_MIN] = self.h_min
        ap[K.AP_H_MAX] = self.h_max
        ap[K.AP_TILT] = self.panel_tilt
        ap[K.AP_T_DERATE] = self.temp_derate
        ap[K.AP_T_IRR] = self.temp_irradiance_coeff
        ap[K.AP_T_REF] = self.temp_ref
        return ap

    def to_json(self) -> dict:
        d = {
            "name": self.name,
            "m_tot": self.m_tot,
            "m_bat": self.m_bat,
            "e_bat": self.e_bat,
            "eta_sm": self.eta_sm,
            "eta_mppt": self.eta_mppt,
            "eta_charge": self.eta_charge,
            "eta_climb": self.eta_climb,
            "a_solar": self.a_solar,
            "c0": self.c0,
            "c1": self.c1,
            "c2": self.c2,
            "p_avionics_payload": self.p_avionics_payload,
            "v_air_min": self.v_air_min,
            "v_air_opt": self.v_air_opt,
            "v_air_max": self.v_air_max,
            "soc_charge_limit_knee": self.soc_charge_limit_knee,
            "h_min": self.h_min,
            "h_max": self.h_max,
            "rho0": self.rho0,
            "panel_tilt": self.panel_tilt,
            "temp_derate": self.temp_derate,
            "temp_irradiance_coeff": self.temp_irradiance_coeff,
            "temp_ref": self.temp_ref,
        }
        if self.meta:
            d["meta"] = self.meta
        return d

    @classmethod
    def from_json(cls, d: dict) -> "AircraftParams":
        d = dict(d)
        if "c0" not in d:
            # convenience form: state the operating point, let the fit fill C's
            c0, c1, c2 = fit_power_curve(
                d.pop("p_flight_opt"),
                d["v_air_opt"],
                d.get("p_avionics_payload", 0.0),
                d.pop("curvature", DEFAULT_CURVATURE_W_PER_MPS2),
            )
            d["c0"], d["c1"], d["c2"] = c0, c1, c2
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


def load_aircraft(source: str | Path | dict) -> AircraftParams:
    """Aircraft params from a JSON file path, JSON dict, or bundled name
    ('as1', 'as2', 'as3')."""
    if isinstance(source, dict):
        return AircraftParams.from_json(source)
    p = Path(source)
    if p.exists():
        return AircraftParams.from_json(json.loads(p.read_text()))
    name = str(source).lower()
    res = resources.files("helios.data").joinpath(f"{name}.json")
    if res.is_file():
        return AircraftParams.from_json(json.loads(res.read_text()))
    raise FileNotFoundError(f"no aircraft parameter file: {source}")


def save_aircraft(path: str | Path, params: AircraftParams) -> None:
    Path(path).write_text(json.dumps(params.to_json(), indent=2, sort_keys=True))
