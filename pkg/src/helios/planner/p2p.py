"""Dynamic-programming point-to-point route optimization.

Forward DP over the planning grid: every node keeps its single best
(minimum cost-to-come) label carrying arrival time, SoC and airspeed, and
every slice transition simulates the full system model along each candidate
edge.  Cancelled or infeasible edges cost infinity.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ..aircraft.params import AircraftParams
from ..aircraft.simulate import (
    AircraftState,
    Environment,
    SegmentTrace,
    SimConfig,
    concat_traces,
    simulate_segment,
)
from ..cost import CostBreakdown, CostParams
from ..environment.errors import DomainError
from ..geo import GeoPoint, great_circle_distance
from .grid import PlanningGrid, build_grid


@dataclass
class NodeLabel:
    cost: float
    time: float
    soc: float
    v_air: float
    parent: tuple[int, int, int] | None  # (slice, vertex, level)

    @property
    def reached(self) -> bool:
        return math.isfinite(self.cost)


@dataclass
class PlanResult:
    waypoints: list[GeoPoint]
    waypoint_times: list[float]
    trace: SegmentTrace | None
    breakdown: CostBreakdown
    cancelled: bool
    total_cost: float
    duration_s: float
    distance_m: float
    min_soc: float
    node_path: list[tuple[int, int, int]] = field(default_factory=list)
    n_edge_evaluations: int = 0
    grid_settings: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    waypoint_airspeeds: list[float] = field(default_factory=list)

    def airspeed_at(self, i: int) -> float | None:
        if i < len(self.waypoint_airspeeds):
            return self.waypoint_airspeeds[i]
        return None

    @property
    def departure_time(self) -> float:
        return self.waypoint_times[0] if self.waypoint_times else 0.0

    @property
    def arrival_time(self) -> float:
        return self.waypoint_times[-1] if self.waypoint_times else 0.0

    def end_state(self) -> AircraftState | None:
        return self.trace.end_state if self.trace is not None else None

    def to_json(self, stride: int = 1) -> dict:
        return {
            "waypoints": [
                {
                    "lat": p.lat,
                    "lon": p.lon,
                    "alt": p.alt_msl,
                    "time": t,
                    "v_air": self.airspeed_at(i),
                }
                for i, (p, t) in enumerate(
                    zip(self.waypoints, self.waypoint_times)
                )
            ],
            "trace": None if self.trace is None else self.trace.to_json(stride),
            "breakdown": self.breakdown.to_json(),
            "cancelled": self.cancelled,
            "total_cost": None if math.isinf(self.total_cost) else self.total_cost,
            "duration_s": self.duration_s,
            "distance_m": self.distance_m,
            "min_soc": self.min_soc,
            "node_path": [list(n) for n in self.node_path],
            "n_edge_evaluations": self.n_edge_evaluations,
            "grid_settings": self.grid_settings,
            "meta": self.meta,
        }


def _edge_cost(
    params: AircraftParams,
    env: Environment,
    cp: CostParams,
    config: SimConfig,
    src_point: GeoPoint,
    src_label: NodeLabel,
    dst_point: GeoPoint,
) -> tuple[float, SegmentTrace]:
    state = AircraftState(
        position=src_point,
        time=src_label.time,
        soc=src_label.soc,
        v_air=src_label.v_air,
    )
    trace = simulate_segment(params, state, dst_point, env, cp, config=config)
    return trace.total_cost(), trace


def optimize(
    grid: PlanningGrid,
    t_depart: float,
    soc0: float,
    params: AircraftParams,
    cost_params: CostParams,
    env: Environment,
    dt: float | None = None,
    config: SimConfig | None = None,
    threads: int = 1,
) -> PlanResult:
    """Run the forward DP and extract the optimal route as a PlanResult."""
    config = config or SimConfig()
    if dt is not None:
        config = replace(config, dt=dt)
    if not env.weather.contains(
        grid.dep.lat, grid.dep.lon, grid.dep.alt_msl, t_depart
    ):
        raise DomainError(
            "time",
            t_depart,
            float(env.weather.time_axis[0]),
            float(env.weather.time_axis[-1]),
        )

    # labels[i][j][k]
    labels: list[list[list[NodeLabel]]] = []
    for i in range(grid.n_slices):
        nv = grid.n_vertices(i)
        nl = len(grid.levels_at(i))
        labels.append(
            [
                [NodeLabel(math.inf, 0.0, 0.0, 0.0, None) for _ in range(nl)]
                for _ in range(nv)
            ]
        )
    labels[0][0][0] = NodeLabel(0.0, t_depart, soc0, params.v_air_opt, None)
    n_evals = 0

    for i in range(1, grid.n_slices):
        sources = [
            (j, k)
            for j in range(grid.n_vertices(i - 1))
            for k in range(len(grid.levels_at(i - 1)))
            if labels[i - 1][j][k].reached
        ]
        targets = [
            (j, k)
            for j in range(grid.n_vertices(i))
            for k in range(len(grid.levels_at(i)))
        ]
        if not sources:
            break

        def relax_target(jk):
            j, k = jk
            dst = grid.point(i, j, k)
            best: NodeLabel | None = None
            evals = 0
            for sj, sk in sources:
                lbl = labels[i - 1][sj][sk]
                src = grid.point(i - 1, sj, sk)
                cost, trace = _edge_cost(
                    params, env, cost_params, config, src, lbl, dst
                )
                evals += 1
                if not math.isfinite(cost):
                    continue
                total = lbl.cost + cost
                if best is None or total < best.cost:
                    best = NodeLabel(
                        cost=total,
                        time=trace.end_state.time,
                        soc=trace.end_state.soc,
                        v_air=trace.end_state.v_air,
                        parent=(i - 1, sj, sk),
                    )
            return j, k, best, evals

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                results = list(ex.map(relax_target, targets))
        else:
            results = [relax_target(t) for t in targets]
        for j, k, best, evals in results:
            n_evals += evals
            if best is not None:
                labels[i][j][k] = best

    final = labels[grid.n_slices - 1][0][0]
    if not final.reached:
        empty = CostBreakdown(terms={}, max_inputs={}, cancelled=True, cancel_term=None)
        return PlanResult(
            waypoints=[grid.dep, grid.arr],
            waypoint_times=[t_depart, t_depart],
            trace=None,
            breakdown=empty,
            cancelled=True,
            total_cost=math.inf,
            duration_s=0.0,
            distance_m=0.0,
            min_soc=soc0,
            n_edge_evaluations=n_evals,
            grid_settings=grid.settings(),
        )

    # backtrack the winning node chain
    chain: list[tuple[int, int, int]] = [(grid.n_slices - 1, 0, 0)]
    while True:
        i, j, k = chain[-1]
        parent = labels[i][j][k].parent
        if parent is None:
            break
        chain.append(parent)
    chain.reverse()

    # re-simulate the winning path to produce the full trace
    traces: list[SegmentTrace] = []
    state = AircraftState(
        position=grid.point(*chain[0]),
        time=t_depart,
        soc=soc0,
        v_air=params.v_air_opt,
    )
    waypoints = [grid.point(*chain[0])]
    times = [t_depart]
    airspeeds = [params.v_air_opt]
    for node in chain[1:]:
        dst = grid.point(*node)
        seg = simulate_segment(params, state, dst, env, cost_params, config=config)
        traces.append(seg)
        state = seg.end_state
        waypoints.append(dst)
        times.append(state.time)
        airspeeds.append(state.v_air)

    full = concat_traces(traces)
    breakdown = CostBreakdown.from_arrays(
        full.integrals, full.max_inputs, not full.feasible, full.cancel_term
    )
    distance = sum(
        great_circle_distance(a.lat, a.lon, b.lat, b.lon)
        for a, b in zip(waypoints[:-1], waypoints[1:])
    )
    socs = full.data[:, 4] if full.n_samples else np.array([soc0])
    min_soc = float(min(socs.min(), full.end_state.soc))
    return PlanResult(
        waypoints=waypoints,
        waypoint_times=times,
        trace=full,
        breakdown=breakdown,
        cancelled=not full.feasible,
        total_cost=final.cost,
        duration_s=full.end_state.time - t_depart,
        distance_m=float(distance),
        min_soc=min_soc,
        node_path=chain,
        n_edge_evaluations=n_evals,
        grid_settings=grid.settings(),
        waypoint_airspeeds=airspeeds,
    )


def launch_window(
    grid: PlanningGrid,
    window: tuple[float, float],
    step_s: float,
    soc0: float,
    params: AircraftParams,
    cost_params: CostParams,
    env: Environment,
    dt: float | None = None,
    config: SimConfig | None = None,
    threads: int = 1,
) -> dict:
    """Sweep departure times over the window; earliest argmin wins ties."""
    t0, t1 = window
    if step_s <= 0:
        raise ValueError("step_s must be positive")
    wt0 = float(env.weather.time_axis[0])
    wt1 = float(env.weather.time_axis[-1])
    if t0 < wt0 - 1e-6 or t1 > wt1 + 1e-6:
        raise DomainError("time", t0 if t0 < wt0 else t1, wt0, wt1)

    entries = []
    best_idx = None
    t = t0
    idx = 0
    while t <= t1 + 1e-9:
        res = optimize(
            grid, t, soc0, params, cost_params, env, dt=dt, config=config, threads=threads
        )
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
            best_idx is None or res.total_cost < entries[best_idx]["total_cost"]
        ):
            best_idx = idx
        t += step_s
        idx += 1
    return {"entries": entries, "best_index": best_idx}


def replan(
    prev: PlanResult,
    current_state: AircraftState,
    env: Environment,
    params: AircraftParams,
    cost_params: CostParams,
    dem=None,
    dt: float | None = None,
    config: SimConfig | None = None,
    threads: int = 1,
) -> PlanResult:
    """Rebuild the grid from the current state to the original arrival and
    re-optimize with fresh weather."""
    arrival = prev.waypoints[-1]
    pos = current_state.position
    remaining = great_circle_distance(pos.lat, pos.lon, arrival.lat, arrival.lon)
    settings = prev.grid_settings or {}
    if remaining < 1000.0:
        empty = CostBreakdown(terms={n: 0.0 for n in ("time",)}, max_inputs={})
        return PlanResult(
            waypoints=[pos],
            waypoint_times=[current_state.time],
            trace=None,
            breakdown=empty,
            cancelled=False,
            total_cost=0.0,
            duration_s=0.0,
            distance_m=0.0,
            min_soc=current_state.soc,
            grid_settings=settings,
            meta={"replan": True, "note": "already at arrival"},
        )

    # scale the slice count with the remaining distance (>= 2)
    n_slices = max(2, int(round(settings.get("n_slices", 10) * remaining / max(prev.distance_m, 1.0))))
    halfwidth = settings.get("lateral_halfwidth_m")
    grid = build_grid(
        dep=pos,
        arr=arrival,
        n_slices=n_slices,
        n_vertices=settings.get("n_vertices", 5),
        altitude_levels=settings.get("altitude_levels", [pos.alt_msl]),
        lateral_halfwidth_m=halfwidth,
        dem=dem,
        shift=settings.get("shift", False),
        accessibility_margin_m=settings.get("accessibility_margin_m", 0.0),
    )
    res = optimize(
        grid,
        current_state.time,
        current_state.soc,
        params,
        cost_params,
        env,
        dt=dt,
        config=config,
        threads=threads,
    )
    res.meta["replan"] = True
    return res
