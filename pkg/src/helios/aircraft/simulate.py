"""Segment simulation: forward-Euler flight along a great-circle leg.

One kernel call integrates kinematics, power balance, SoC and the cost
terms together; this module wraps it with typed state/trace objects.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .. import kernels as K
from ..environment.errors import DomainError
from ..environment.grid import WeatherGrid, WeatherSample
from ..environment.solar import DEFAULT_TRANSMITTANCE
from ..environment.terrain import Dem
from ..geo import GeoPoint, great_circle_distance
from .params import AircraftParams

_STATUS_TEXT = {
    K.ST_OK: "ok",
    K.ST_CANCELLED: "cancelled by cost limit",
    K.ST_WIND_INFEASIBLE: "wind triangle infeasible at v_air_max",
    K.ST_DOMAIN_TIME: "outside weather time domain",
    K.ST_DOMAIN_LAT: "outside weather lat domain",
    K.ST_DOMAIN_LON: "outside weather lon domain",
    K.ST_DOMAIN_ALT: "outside weather alt domain",
    K.ST_CLIMB_INFEASIBLE: "altitude change exceeds max climb angle over the leg",
    K.ST_MAX_STEPS: "step limit exceeded",
}

_DOMAIN_STATUSES = (
    K.ST_DOMAIN_TIME,
    K.ST_DOMAIN_LAT,
    K.ST_DOMAIN_LON,
    K.ST_DOMAIN_ALT,
)


@dataclass
class AircraftState:
    position: GeoPoint
    time: float  # unix seconds UTC
    soc: float
    v_air: float
    course: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.soc <= 1.0:
            raise ValueError(f"soc={self.soc} outside [0, 1]")


@dataclass
class Environment:
    """Read-only environment handles a simulation queries against."""

    weather: WeatherGrid
    dem: Dem | None = None
    transmittance: float = DEFAULT_TRANSMITTANCE


@dataclass
class SimConfig:
    dt: float = 600.0
    v_gnd_floor: float = 2.0
    max_climb_angle_deg: float = 3.0
    allow_speedup: bool = True
    soc_full_eps: float = 0.005
    # heuristic-bound overrides (see multigoal.point_heuristic)
    forced_tailwind: float | None = None
    clear_sky_income: bool = False
    fixed_v_air: float | None = None

    def pack(self, transmittance: float, hold: float = 0.0) -> np.ndarray:
        cfg = np.zeros(K.N_CF)
        cfg[K.CF_DT] = self.dt
        cfg[K.CF_VGND_FLOOR] = self.v_gnd_floor
        cfg[K.CF_MAX_CLIMB_TAN] = math.tan(math.radians(self.max_climb_angle_deg))
        cfg[K.CF_ALLOW_SPEEDUP] = 1.0 if self.allow_speedup else 0.0
        cfg[K.CF_SOC_FULL_EPS] = self.soc_full_eps
        cfg[K.CF_CS_TAU] = transmittance
        cfg[K.CF_HOLD] = hold
        if self.forced_tailwind is not None:
            cfg[K.CF_WIND_MODE] = 1.0
            cfg[K.CF_WIND_TAIL] = self.forced_tailwind
        if self.clear_sky_income:
            cfg[K.CF_RAD_MODE] = 1.0
        if self.fixed_v_air is not None:
            cfg[K.CF_FIXED_VAIR] = self.fixed_v_air
        return cfg


@dataclass
class SegmentTrace:
    """Per-step samples plus the terminal state of one simulated segment."""

    data: np.ndarray  # [n, N_TRACE_COLS]
    end_state: AircraftState
    feasible: bool
    status: int
    cancel_term: str | None
    integrals: np.ndarray  # accumulated per-term cost, kernel-side
    max_inputs: np.ndarray
    params: AircraftParams
    dem: Dem | None = None
    transmittance: float = DEFAULT_TRANSMITTANCE
    _start_time: float = 0.0

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.data[:, K.TR_TIME]

    @property
    def duration(self) -> float:
        return self.end_state.time - self._start_time

    @property
    def status_text(self) -> str:
        return _STATUS_TEXT.get(self.status, f"status {self.status}")

    def step_lengths(self) -> np.ndarray:
        """dt of each recorded step (the last one closes on the end state)."""
        if self.n_samples == 0:
            return np.zeros(0)
        t = np.append(self.times, self.end_state.time)
        return np.diff(t)

    def weather_sample(self, i: int) -> WeatherSample:
        return WeatherSample.from_vector(self.data[i, K.TR_SAMPLE0 : K.TR_SAMPLE0 + 9])

    def total_cost(self) -> float:
        return float("inf") if not self.feasible else float(self.integrals.sum())

    def to_json(self, stride: int = 1) -> dict:
        rows = self.data[:: max(1, stride)]
        return {
            "columns": [
                "time",
                "lat",
                "lon",
                "alt",
                "soc",
                "v_air",
                "v_gnd",
                "heading",
                "p_solar",
                "p_flight",
                "temperature",
                "humidity",
                "wind_east",
                "wind_north",
                "gust",
                "precip_rate",
                "cape",
                "irradiance_total",
                "irradiance_direct",
                "radiation_factor",
                "excess_power",
                "altitude_agl",
            ]
            + [f"rate_{n}" for n in K.TERM_NAMES],
            "rows": [[float(v) for v in r] for r in rows],
            "end": {
                "time": self.end_state.time,
                "lat": self.end_state.position.lat,
                "lon": self.end_state.position.lon,
                "alt": self.end_state.position.alt_msl,
                "soc": self.end_state.soc,
                "v_air": self.end_state.v_air,
            },
            "feasible": self.feasible,
            "status": self.status_text,
            "cancel_term": self.cancel_term,
        }


def concat_traces(traces: list[SegmentTrace]) -> SegmentTrace:
    """Stitch consecutive traces into one (states must chain)."""
    if not traces:
        raise ValueError("no traces to concatenate")
    data = np.vstack([t.data for t in traces if t.n_samples])
    last = traces[-1]
    feasible = all(t.feasible for t in traces)
    cancel = next((t.cancel_term for t in traces if t.cancel_term), None)
    integrals = np.sum([t.integrals for t in traces], axis=0)
    max_inputs = np.max([t.max_inputs for t in traces], axis=0)
    return SegmentTrace(
        data=data,
        end_state=last.end_state,
        feasible=feasible,
        status=next((t.status for t in traces if t.status != K.ST_OK), K.ST_OK),
        cancel_term=cancel,
        integrals=integrals,
        max_inputs=max_inputs,
        params=last.params,
        dem=last.dem,
        transmittance=last.transmittance,
        _start_time=traces[0]._start_time,
    )


def _dem_pack(dem: Dem | None):
    if dem is None:
        return (
            np.zeros(1),
            np.zeros(1),
            np.zeros((1, 1)),
            0,
        )
    dlat, dlon, delev = dem.pack()
    return dlat, dlon, delev, 1


def _run_kernel(
    params: AircraftParams,
    start: AircraftState,
    target: GeoPoint,
    env: Environment,
    cost_arrays,
    cfg: np.ndarray,
    hold: float,
) -> SegmentTrace:
    wt, wa, wla, wlo, wstep, f3, f2 = env.weather.pack()
    dlat, dlon, delev, has_dem = _dem_pack(env.dem)
    ap = params.pack()
    c_time, alphas, betas, epss, enabled = cost_arrays

    dist = great_circle_distance(
        start.position.lat, start.position.lon, target.lat, target.lon
    )
    dt = cfg[K.CF_DT]
    max_steps = int(dist / (0.2 * dt)) + int(hold / dt) + 64
    max_steps = min(max_steps, 5_000_000)
    trace = np.zeros((max_steps, K.N_TRACE_COLS))

    n, status, cancel_term, t_end, soc_end, v_end, integrals, max_inputs = (
        K.segment_kernel(
            wt,
            wa,
            wla,
            wlo,
            wstep,
            f3,
            f2,
            dlat,
            dlon,
            delev,
            has_dem,
            ap,
            c_time,
            alphas,
            betas,
            epss,
            enabled,
            cfg,
            start.position.lat,
            start.position.lon,
            start.position.alt_msl,
            start.time,
            start.soc,
            target.lat,
            target.lon,
            target.alt_msl,
            trace,
        )
    )

    if status in _DOMAIN_STATUSES:
        # surface the offending axis with the grid bounds
        axis = {
            K.ST_DOMAIN_TIME: "time",
            K.ST_DOMAIN_LAT: "lat",
            K.ST_DOMAIN_LON: "lon",
            K.ST_DOMAIN_ALT: "alt",
        }[status]
        b = env.weather.bounds()[axis]
        raise DomainError(axis, float("nan"), b[0], b[1])

    end_pos = (
        GeoPoint(target.lat, target.lon, target.alt_msl)
        if (status == K.ST_OK and hold == 0.0)
        else GeoPoint(
            float(trace[n - 1, K.TR_LAT]) if n else start.position.lat,
            float(trace[n - 1, K.TR_LON]) if n else start.position.lon,
            float(trace[n - 1, K.TR_ALT]) if n else start.position.alt_msl,
        )
    )
    if hold > 0.0 and status == K.ST_OK:
        end_pos = start.position
    end_state = AircraftState(
        position=end_pos,
        time=float(t_end),
        soc=float(soc_end),
        v_air=float(v_end),
        course=float(trace[n - 1, K.TR_HEADING]) if n else start.course,
    )
    return SegmentTrace(
        data=trace[:n].copy(),
        end_state=end_state,
        feasible=status == K.ST_OK,
        status=int(status),
        cancel_term=K.TERM_NAMES[cancel_term] if cancel_term >= 0 else None,
        integrals=integrals,
        max_inputs=max_inputs,
        params=params,
        dem=env.dem,
        transmittance=env.transmittance,
        _start_time=start.time,
    )


def simulate_segment(
    params: AircraftParams,
    start: AircraftState,
    target: GeoPoint,
    env: Environment,
    cost_params,
    dt: float | None = None,
    config: SimConfig | None = None,
) -> SegmentTrace:
    """Fly from the start state to the target point; returns the trace."""
    config = config or SimConfig()
    if dt is not None:
        config = replace(config, dt=dt)
    if config.dt <= 0:
        raise ValueError("dt must be positive")
    cfg = config.pack(env.transmittance, hold=0.0)
    return _run_kernel(
        params, start, target, env, cost_params.pack(), cfg, hold=0.0
    )


def simulate_loiter(
    params: AircraftParams,
    start: AircraftState,
    duration: float,
    env: Environment,
    cost_params,
    dt: float | None = None,
    config: SimConfig | None = None,
) -> SegmentTrace:
    """Station-keep at the start position for `duration` seconds."""
    if duration <= 0:
        raise ValueError("duration must be positive")
    config = config or SimConfig()
    if dt is not None:
        config = replace(config, dt=dt)
    cfg = config.pack(env.transmittance, hold=duration)
    return _run_kernel(
        params, start, start.position, env, cost_params.pack(), cfg, hold=duration
    )


@dataclass
class PolicyContext:
    course: float
    target_alt: float | None = None
    v_gnd_floor: float = 2.0
    allow_speedup: bool = True
    dt: float = 600.0
    max_climb_angle_deg: float = 3.0


def flight_policy(
    params: AircraftParams,
    state: AircraftState,
    sample: WeatherSample,
    ctx: PolicyContext,
) -> tuple[float, float]:
    """Commanded (airspeed, climb rate) from the on-board planner rules."""
    elev, _ = K.sun_position(state.position.lat, state.position.lon, state.time)
    p_solar = K.solar_power(
        params.pack(),
        sample.irradiance_total,
        sample.irradiance_direct,
        elev,
        sample.temperature,
    )
    rho = K.air_density(state.position.alt_msl)
    c = math.radians(ctx.course)
    along = sample.wind_east * math.sin(c) + sample.wind_north * math.cos(c)
    cross = sample.wind_east * math.cos(c) - sample.wind_north * math.sin(c)
    dh = 0.0
    if ctx.target_alt is not None:
        dh = ctx.target_alt - state.position.alt_msl
    climb_pending = 1 if abs(dh) > 1e-6 else 0
    cfg = SimConfig(
        dt=ctx.dt,
        v_gnd_floor=ctx.v_gnd_floor,
        max_climb_angle_deg=ctx.max_climb_angle_deg,
        allow_speedup=ctx.allow_speedup,
    ).pack(DEFAULT_TRANSMITTANCE)
    v_cmd = float(
        K.policy_airspeed(params.pack(), cfg, state.soc, p_solar, rho, along, cross, climb_pending)
    )
    tri = K.wind_triangle(v_cmd, sample.wind_east, sample.wind_north, ctx.course)
    v_gnd = tri[1] if tri[0] else 0.0
    max_rate = math.tan(math.radians(ctx.max_climb_angle_deg)) * v_gnd
    climb_cmd = max(-max_rate, min(max_rate, dh / ctx.dt))
    return v_cmd, climb_cmd
