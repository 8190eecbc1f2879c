"""Mission definitions: parsing, validation and execution dispatch.

A mission definition is a JSON document naming the aircraft, cost preset,
weather (and optional DEM) files, and the mission-type-specific geometry.
The same schema serves the CLI, the HTTP service and the stored records.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .aircraft.params import AircraftParams, load_aircraft
from .aircraft.simulate import (
    AircraftState,
    Environment,
    SimConfig,
    simulate_loiter,
)
from .cost import CostBreakdown, CostParams, load_cost_params
from .environment.grid import WeatherGrid, load_weather
from .environment.terrain import Dem, load_dem
from .geo import GeoPoint
from .multigoal import MultigoalResult, solve
from .planner.grid import build_grid
from .planner.p2p import PlanResult, launch_window, optimize
from .scan import AreaOfInterest, ScanParams

MISSION_TYPES = ("station_keeping", "p2p", "multigoal")


class MissionValidationError(ValueError):
    pass


def _point(d: dict, what: str) -> GeoPoint:
    try:
        return GeoPoint(float(d["lat"]), float(d["lon"]), float(d.get("alt", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise MissionValidationError(f"bad {what} point: {exc}") from exc


@dataclass
class MissionDef:
    raw: dict
    base_dir: Path
    mission_type: str
    aircraft: AircraftParams
    cost: CostParams
    weather_path: Path
    dem_path: Path | None
    start: GeoPoint
    initial_time: float
    initial_soc: float
    sim: SimConfig
    arrival: GeoPoint | None = None
    grid: dict = field(default_factory=dict)
    aois: list[AreaOfInterest] = field(default_factory=list)
    scan: ScanParams | None = None
    edge_grid: dict = field(default_factory=dict)
    duration_s: float = 0.0
    use_heuristic: bool = True

    _weather: WeatherGrid | None = field(default=None, repr=False)
    _dem: Dem | None = field(default=None, repr=False)

    def environment(self, weather_override: str | Path | None = None) -> Environment:
        if weather_override is not None:
            wx = load_weather(self._resolve(weather_override))
        else:
            if self._weather is None:
                self._weather = load_weather(self.weather_path)
            wx = self._weather
        if self.dem_path is not None and self._dem is None:
            self._dem = load_dem(self.dem_path)
        return Environment(weather=wx, dem=self._dem)

    def _resolve(self, p: str | Path) -> Path:
        p = Path(p)
        return p if p.is_absolute() else self.base_dir / p


def parse_definition(d: dict, base_dir: str | Path = ".") -> MissionDef:
    base = Path(base_dir)
    mission_type = d.get("mission_type")
    if mission_type not in MISSION_TYPES:
        raise MissionValidationError(
            f"mission_type must be one of {MISSION_TYPES}, got {mission_type!r}"
        )
    try:
        aircraft = load_aircraft(d.get("aircraft", "as2"))
    except (FileNotFoundError, ValueError, KeyError) as exc:
        raise MissionValidationError(f"aircraft: {exc}") from exc
    try:
        cost = load_cost_params(d.get("cost", "81h"))
    except (FileNotFoundError, ValueError, KeyError) as exc:
        raise MissionValidationError(f"cost: {exc}") from exc

    weather_ref = d.get("weather")
    if not weather_ref:
        raise MissionValidationError("definition needs a 'weather' file reference")
    weather_path = Path(weather_ref)
    if not weather_path.is_absolute():
        weather_path = base / weather_path
    if not weather_path.exists():
        raise MissionValidationError(f"weather file not found: {weather_path}")

    dem_path = None
    if d.get("dem"):
        dem_path = Path(d["dem"])
        if not dem_path.is_absolute():
            dem_path = base / dem_path
        if not dem_path.exists():
            raise MissionValidationError(f"dem file not found: {dem_path}")

    start = _point(d.get("start", {}), "start")
    t0 = float(d.get("initial_time", 0.0))
    soc0 = float(d.get("initial_soc", 1.0))
    if not 0.0 <= soc0 <= 1.0:
        raise MissionValidationError(f"initial_soc {soc0} outside [0, 1]")

    simd = d.get("sim", {})
    sim = SimConfig(
        dt=float(simd.get("dt_s", 600.0)),
        v_gnd_floor=float(simd.get("v_gnd_floor", 2.0)),
        max_climb_angle_deg=float(simd.get("max_climb_angle_deg", 3.0)),
        allow_speedup=bool(simd.get("allow_speedup", True)),
    )

    md = MissionDef(
        raw=d,
        base_dir=base,
        mission_type=mission_type,
        aircraft=aircraft,
        cost=cost,
        weather_path=weather_path,
        dem_path=dem_path,
        start=start,
        initial_time=t0,
        initial_soc=soc0,
        sim=sim,
        use_heuristic=bool(d.get("heuristic", True)),
    )

    if mission_type == "p2p":
        if "arrival" not in d:
            raise MissionValidationError("p2p mission needs an 'arrival' point")
        md.arrival = _point(d["arrival"], "arrival")
        md.grid = dict(d.get("grid", {}))
    elif mission_type == "multigoal":
        aois_raw = d.get("aois", [])
        if not aois_raw:
            raise MissionValidationError("multigoal mission needs 'aois'")
        try:
            md.aois = [AreaOfInterest.from_json(a) for a in aois_raw]
        except (ValueError, KeyError) as exc:
            raise MissionValidationError(f"aois: {exc}") from exc
        scan_d = d.get("scan")
        if not scan_d:
            raise MissionValidationError("multigoal mission needs 'scan' parameters")
        try:
            md.scan = ScanParams(
                camera_fov_lateral=float(scan_d["camera_fov_lateral"]),
                lateral_overlap=float(scan_d["lateral_overlap"]),
                airspeed=float(scan_d["airspeed"]),
                turn_radius=float(scan_d["turn_radius"]),
                course_angle_step=float(scan_d.get("course_angle_step", 5.0)),
            )
        except (ValueError, KeyError) as exc:
            raise MissionValidationError(f"scan: {exc}") from exc
        md.edge_grid = dict(d.get("edge_grid", {}))
    else:  # station_keeping
        hours = d.get("duration_h")
        if hours is None or float(hours) <= 0:
            raise MissionValidationError(
                "station_keeping mission needs a positive 'duration_h'"
            )
        md.duration_s = float(hours) * 3600.0

    return md


def loiter_plan_result(
    md: MissionDef,
    env: Environment,
    t_depart: float | None = None,
    soc0: float | None = None,
) -> PlanResult:
    """Pure state propagation at the start point (no route search)."""
    t0 = md.initial_time if t_depart is None else t_depart
    soc = md.initial_soc if soc0 is None else soc0
    state = AircraftState(
        position=md.start, time=t0, soc=soc, v_air=md.aircraft.v_air_opt
    )
    trace = simulate_loiter(
        md.aircraft, state, md.duration_s, env, md.cost, config=md.sim
    )
    breakdown = CostBreakdown.from_arrays(
        trace.integrals, trace.max_inputs, not trace.feasible, trace.cancel_term
    )
    socs = trace.data[:, 4] if trace.n_samples else np.array([soc])
    return PlanResult(
        waypoints=[md.start],
        waypoint_times=[t0],
        trace=trace,
        breakdown=breakdown,
        cancelled=not trace.feasible,
        total_cost=trace.total_cost(),
        duration_s=trace.duration,
        distance_m=0.0,
        min_soc=float(min(socs.min(), trace.end_state.soc)),
        meta={"kind": "station_keeping"},
        waypoint_airspeeds=[md.aircraft.v_air_opt],
    )


def run_mission(
    md: MissionDef,
    kind: str | None = None,
    t_depart: float | None = None,
    soc0: float | None = None,
    weather_override: str | Path | None = None,
    threads: int = 1,
) -> tuple[PlanResult, MultigoalResult | None]:
    """Execute the mission; returns (plan, multigoal extras or None)."""
    kind = kind or md.mission_type
    env = md.environment(weather_override)
    t0 = md.initial_time if t_depart is None else t_depart
    soc = md.initial_soc if soc0 is None else soc0

    if kind == "station_keeping":
        return loiter_plan_result(md, env, t0, soc), None

    if kind == "p2p":
        grid = build_grid(
            dep=md.start,
            arr=md.arrival,
            n_slices=int(md.grid.get("n_slices", 10)),
            n_vertices=int(md.grid.get("n_vertices", 5)),
            altitude_levels=list(
                md.grid.get("altitude_levels", [md.start.alt_msl])
            ),
            lateral_halfwidth_m=md.grid.get("lateral_halfwidth_m"),
            dem=env.dem,
            weather=env.weather,
            shift=bool(md.grid.get("shift", env.dem is not None)),
            accessibility_margin_m=float(md.grid.get("accessibility_margin_m", 0.0)),
        )
        plan = optimize(
            grid, t0, soc, md.aircraft, md.cost, env, config=md.sim, threads=threads
        )
        plan.meta["kind"] = "p2p"
        return plan, None

    if kind == "multigoal":
        result = solve(
            start=md.start,
            aois=md.aois,
            scan_params=md.scan,
            params=md.aircraft,
            cost_params=md.cost,
            env=env,
            t0=t0,
            soc0=soc,
            edge_grid=md.edge_grid,
            config=md.sim,
            use_heuristic=md.use_heuristic,
            threads=threads,
        )
        return result.plan, result

    raise MissionValidationError(f"unknown plan kind {kind!r}")


def run_launch_window(
    md: MissionDef,
    window: tuple[float, float],
    step_s: float,
    threads: int = 1,
) -> dict:
    env = md.environment()
    if md.mission_type == "p2p":
        grid = build_grid(
            dep=md.start,
            arr=md.arrival,
            n_slices=int(md.grid.get("n_slices", 10)),
            n_vertices=int(md.grid.get("n_vertices", 5)),
            altitude_levels=list(md.grid.get("altitude_levels", [md.start.alt_msl])),
            lateral_halfwidth_m=md.grid.get("lateral_halfwidth_m"),
            dem=env.dem,
            shift=bool(md.grid.get("shift", env.dem is not None)),
            accessibility_margin_m=float(md.grid.get("accessibility_margin_m", 0.0)),
        )
        return launch_window(
            grid,
            window,
            step_s,
            md.initial_soc,
            md.aircraft,
            md.cost,
            env,
            config=md.sim,
            threads=threads,
        )
    if md.mission_type == "station_keeping":
        entries = []
        best_idx = None
        t = window[0]
        idx = 0
        while t <= window[1] + 1e-9:
            res = loiter_plan_result(md, env, t)
            entries.append(
                {
                    "t_depart": t,
                    "total_cost": res.total_cost,
                    "min_soc": res.min_soc,
                    "duration_s": res.duration_s,
                    "cancelled": res.cancelled,
                }
            )
            if not res.cancelled and (
                best_idx is None
                or res.total_cost < entries[best_idx]["total_cost"]
            ):
                best_idx = idx
            t += step_s
            idx += 1
        return {"entries": entries, "best_index": best_idx}
    raise MissionValidationError(
        "launch-window sweeps support p2p and station_keeping missions"
    )
