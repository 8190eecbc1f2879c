"""Time- and SoC-aware multi-goal (visit order) optimization.

The visit-order problem over N areas of interest is unrolled into an
arborescence of visit-sequence labels (root = start, leaves = complete
tours ending at the goal).  An extended A* walks it best-first, propagating
departure time and state of charge along each branch and pruning with an
admissible two-stage heuristic: per-leg best-case costs combined bottom-up
by minimizing over completion orders.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from heapq import heappop, heappush

import numpy as np

from .aircraft.params import AircraftParams
from .aircraft.simulate import (
    AircraftState,
    Environment,
    SimConfig,
    concat_traces,
)
from .cost import CostBreakdown, CostParams
from .environment.grid import WeatherGrid
from .geo import GeoPoint, great_circle_distance
from .planner.grid import build_grid
from .planner.p2p import PlanResult, optimize
from .scan import AreaOfInterest, ScanParams, ScanResult, optimize_scan

START = "S"
GOAL = "G"


class MissionInfeasibleError(RuntimeError):
    def __init__(self, message: str, reasons: list[str]):
        super().__init__(message)
        self.reasons = reasons


# --- SPP graph ----------------------------------------------------------------


@dataclass
class MissionGraph:
    node_ids: tuple[str, ...]

    def __post_init__(self):
        if not 1 <= len(self.node_ids) <= 10:
            raise ValueError("node count must be within 1..10")
        if len(set(self.node_ids)) != len(self.node_ids):
            raise ValueError("node ids must be unique")
        for nid in self.node_ids:
            if nid in (START, GOAL):
                raise ValueError(f"node id {nid!r} is reserved")

    @property
    def n(self) -> int:
        return len(self.node_ids)

    def vertex_count(self) -> int:
        """All visit-sequence labels excluding the root, goal leaves included."""
        n = self.n
        partial = sum(
            math.factorial(n) // math.factorial(n - r) for r in range(1, n + 1)
        )
        return partial + math.factorial(n)

    def children(self, label: tuple[str, ...]):
        """(child_label, from_node, to_node) for a label; empty for leaves."""
        if label and label[-1] == GOAL:
            return []
        last = label[-1] if label else START
        unvisited = [m for m in self.node_ids if m not in label]
        if unvisited:
            return [(label + (m,), last, m) for m in unvisited]
        return [(label + (GOAL,), last, GOAL)]

    def iter_labels(self):
        """Every non-root label (depth-first, lexicographic)."""

        def rec(label):
            for child, _f, _t in self.children(label):
                yield child
                yield from rec(child)

        yield from rec(())


def build_spp_graph(node_ids: list[str]) -> MissionGraph:
    return MissionGraph(node_ids=tuple(node_ids))


@dataclass
class SppVertex:
    label: tuple[str, ...]
    g: float = math.inf
    h: float = 0.0
    t: float = 0.0
    soc: float = 1.0
    parent: tuple[str, ...] | None = None
    status: str = "unlabeled"  # -> open -> closed


# --- heuristic ------------------------------------------------------------------


def _mesh_extremes(weather: WeatherGrid, horizon: tuple[float, float] | None) -> dict:
    """Best-case per-term figures over the mesh and time horizon."""
    wt, _wa, _wla, _wlo, _steps, f3, f2 = weather.pack()
    if horizon is None:
        sel = slice(None)
    else:
        t0, t1 = horizon
        idx = np.nonzero((wt >= t0 - 1e-6) & (wt <= t1 + 1e-6))[0]
        if idx.size == 0:
            idx = np.array([np.argmin(np.abs(wt - t0))])
        sel = slice(int(idx[0]), int(idx[-1]) + 1)
    speed = np.hypot(f3[2, sel], f3[3, sel])
    return {
        "wind_max": float(speed.max()),
        "wind_min": float(speed.min()),
        "humidity_min": float(f3[1, sel].min()),
        "temperature_mean": float(f3[0, sel].mean()),
        "gust_min": float(f2[0, sel].min()),
        "precip_min": float(f2[1, sel].min()),
        "cape_min": float(f2[2, sel].min()),
    }


def _best_case_env(weather: WeatherGrid, ext: dict, alt: float) -> Environment:
    """Uniform 'nowhere worse' weather grid for heuristic simulations."""
    nt, na, ny, nx = 2, 1, 2, 2
    t0 = float(weather.time_axis[0])
    span = 120.0 * 86400.0
    grid = WeatherGrid(
        time_axis=np.array([t0 - span, t0 + span]),
        alt_axis=np.array([alt]),
        lat_axis=np.array([-89.9, 89.9]),
        lon_axis=np.array([-180.0, 179.9]),
        fields3d={
            "temperature": np.full((nt, na, ny, nx), ext["temperature_mean"], np.float32),
            "relative_humidity": np.full((nt, na, ny, nx), ext["humidity_min"], np.float32),
            "wind_east": np.full((nt, na, ny, nx), ext["wind_min"], np.float32),
            "wind_north": np.zeros((nt, na, ny, nx), np.float32),
        },
        fields2d={
            "gust": np.full((nt, ny, nx), ext["gust_min"], np.float32),
            "precipitation": np.full(
                (nt, ny, nx), ext["precip_min"] / 3600.0 * span, np.float32
            ),
            "cape": np.full((nt, ny, nx), ext["cape_min"], np.float32),
            "radiation_total": np.zeros((nt, ny, nx), np.float32),
            "radiation_direct": np.zeros((nt, ny, nx), np.float32),
        },
        accumulation_step_s=span,
    )
    return Environment(weather=grid, dem=None)


@dataclass
class PointHeuristic:
    """Lower-bound leg costs from best-case weather along the orthodrome."""

    params: AircraftParams
    cost_params: CostParams
    env: Environment
    t_ref: float
    config: SimConfig = field(default_factory=SimConfig)
    horizon: tuple[float, float] | None = None
    _ext: dict | None = None

    def extremes(self) -> dict:
        if self._ext is None:
            self._ext = _mesh_extremes(self.env.weather, self.horizon)
        return self._ext

    def leg(self, a: GeoPoint, b: GeoPoint) -> float:
        dist = great_circle_distance(a.lat, a.lon, b.lat, b.lon)
        if dist < 1.0:
            return 0.0
        ext = self.extremes()
        wa = self.env.weather.alt_axis
        alt = min(a.alt_msl, b.alt_msl)
        alt = float(min(max(alt, wa[0]), wa[-1]))
        from dataclasses import replace

        cfg = replace(
            self.config,
            allow_speedup=False,
            forced_tailwind=ext["wind_max"],
            clear_sky_income=True,
        )
        env_best = _best_case_env(self.env.weather, ext, alt)
        state = AircraftState(
            position=GeoPoint(a.lat, a.lon, alt),
            time=self.t_ref,
            soc=1.0,
            v_air=self.params.v_air_opt,
        )
        from .aircraft.simulate import simulate_segment

        trace = simulate_segment(
            self.params,
            state,
            GeoPoint(b.lat, b.lon, alt),
            env_best,
            self.cost_params,
            config=cfg,
        )
        return trace.total_cost() if trace.feasible else 0.0


def point_heuristic_table(
    anchors: dict[str, GeoPoint],
    node_ids: list[str],
    ph: PointHeuristic,
) -> dict[tuple[str, str], float]:
    """h_nm for every ordered pair the search can traverse."""
    table: dict[tuple[str, str], float] = {}
    ids = list(node_ids)
    for m in ids:
        table[(START, m)] = ph.leg(anchors[START], anchors[m])
        table[(m, GOAL)] = ph.leg(anchors[m], anchors[GOAL])
    for a in ids:
        for b in ids:
            if a != b:
                table[(a, b)] = ph.leg(anchors[a], anchors[b])
    if len(ids) == 0:
        table[(START, GOAL)] = 0.0
    return table


def cost_to_go(
    graph: MissionGraph, h_nm: dict[tuple[str, str], float]
) -> callable:
    """h(label): minimum over completion orders of summed per-leg bounds.

    The bound of a label depends only on (last node, unvisited set); goal
    leaves are zero, and min over children keeps the lower-bound property
    at branch points.
    """
    memo: dict[tuple[str, frozenset], float] = {}

    def h_state(last: str, remaining: frozenset) -> float:
        key = (last, remaining)
        if key in memo:
            return memo[key]
        if not remaining:
            val = h_nm.get((last, GOAL), 0.0) if last != GOAL else 0.0
        else:
            val = min(
                h_nm[(last, m)] + h_state(m, remaining - {m}) for m in remaining
            )
        memo[key] = val
        return val

    def h_of(label: tuple[str, ...]) -> float:
        if label and label[-1] == GOAL:
            return 0.0
        last = label[-1] if label else START
        remaining = frozenset(m for m in graph.node_ids if m not in label)
        return h_state(last, remaining)

    return h_of


# --- extended A* over the arborescence -------------------------------------------


@dataclass
class SolveReport:
    order: list[str]
    total_cost: float
    expansions: list[dict]
    n_evaluations: int
    n_naive: int
    goal_label: tuple[str, ...]
    vertices: dict[tuple[str, ...], SppVertex]
    infeasible_reasons: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "total_cost": self.total_cost,
            "n_heuristic": self.n_evaluations,
            "n_naive": self.n_naive,
            "expansions": self.expansions,
        }


def solve_order(
    graph: MissionGraph,
    edge_fn,
    h_of,
    t0: float,
    soc0: float,
    scan_time: dict[str, float],
    scan_dsoc: dict[str, float],
) -> SolveReport:
    """Best-first search of the visit-sequence arborescence.

    edge_fn(from_node, to_node, t, soc) -> (cost, duration_s, delta_soc);
    infinite cost marks an infeasible leg.  Returns the optimal goal label
    with bookkeeping; raises MissionInfeasibleError when no tour survives.
    """
    vertices: dict[tuple[str, ...], SppVertex] = {
        (): SppVertex(label=(), g=0.0, h=h_of(()), t=t0, soc=soc0, status="open")
    }
    heap: list[tuple[float, tuple[str, ...]]] = [(vertices[()].h, ())]
    g_goal = math.inf
    n_evals = 0
    expansions: list[dict] = []
    reasons: list[str] = []
    opened_once: set[tuple[str, ...]] = {()}

    while heap:
        f, label = heappop(heap)
        v = vertices[label]
        if v.status == "closed":
            raise AssertionError(f"vertex {label} expanded twice")
        if label and label[-1] == GOAL:
            order = [n for n in label if n != GOAL]
            expansions.append({"label": list(label), "g": v.g, "h": v.h})
            return SolveReport(
                order=order,
                total_cost=v.g,
                expansions=expansions,
                n_evaluations=n_evals,
                n_naive=graph.vertex_count(),
                goal_label=label,
                vertices=vertices,
                infeasible_reasons=reasons,
            )
        expansions.append({"label": list(label), "g": v.g, "h": v.h})
        for child_label, from_node, to_node in graph.children(label):
            cost, duration, dsoc = edge_fn(from_node, to_node, v.t, v.soc)
            n_evals += 1
            if not math.isfinite(cost):
                reasons.append(
                    f"leg {from_node}->{to_node} at t={v.t:.0f} infeasible"
                )
                continue
            w = vertices.get(child_label)
            g_new = v.g + cost
            h_w = h_of(child_label)
            if (w is None or g_new < w.g) and g_new + h_w < g_goal:
                if child_label in opened_once and w is not None and w.status != "unlabeled":
                    raise AssertionError(f"vertex {child_label} opened twice")
                t_w = v.t + duration + scan_time.get(to_node, 0.0)
                soc_w = v.soc + dsoc + scan_dsoc.get(to_node, 0.0)
                soc_w = min(1.0, max(0.0, soc_w))
                vertices[child_label] = SppVertex(
                    label=child_label,
                    g=g_new,
                    h=h_w,
                    t=t_w,
                    soc=soc_w,
                    parent=label,
                    status="open",
                )
                opened_once.add(child_label)
                heappush(heap, (g_new + h_w, child_label))
                if child_label[-1] == GOAL and g_new < g_goal:
                    g_goal = g_new
        v.status = "closed"

    raise MissionInfeasibleError(
        "no feasible tour: every branch was pruned or cancelled", reasons
    )


# --- brute-force oracle (verification) ---------------------------------------------


def enumerate_orders(
    node_ids: list[str],
    edge_fn,
    t0: float,
    soc0: float,
    scan_time: dict[str, float],
    scan_dsoc: dict[str, float],
) -> tuple[list[str] | None, float, dict[tuple[str, ...], float]]:
    """Exhaustive tour enumeration with the identical edge oracle."""
    best_order = None
    best_cost = math.inf
    totals: dict[tuple[str, ...], float] = {}
    for perm in itertools.permutations(sorted(node_ids)):
        t = t0
        soc = soc0
        total = 0.0
        prev = START
        feasible = True
        for m in perm:
            cost, duration, dsoc = edge_fn(prev, m, t, soc)
            if not math.isfinite(cost):
                feasible = False
                break
            total += cost
            t += duration + scan_time.get(m, 0.0)
            soc = min(1.0, max(0.0, soc + dsoc + scan_dsoc.get(m, 0.0)))
            prev = m
        if feasible:
            cost, duration, dsoc = edge_fn(prev, GOAL, t, soc)
            if math.isfinite(cost):
                total += cost
            else:
                feasible = False
        totals[perm] = total if feasible else math.inf
        if feasible and total < best_cost:
            best_cost = total
            best_order = list(perm)
    return best_order, best_cost, totals


# --- full-stack solver ---------------------------------------------------------------


@dataclass
class EdgeOracle:
    """Edge costs via the point-to-point planner, cached on exact keys."""

    anchors: dict[str, GeoPoint]
    params: AircraftParams
    cost_params: CostParams
    env: Environment
    edge_grid: dict
    config: SimConfig = field(default_factory=SimConfig)
    threads: int = 1
    cache: dict = field(default_factory=dict)
    n_compute: int = 0
    n_hit: int = 0

    def _grid(self, a: str, b: str):
        key = ("grid", a, b)
        if key not in self.cache:
            pa, pb = self.anchors[a], self.anchors[b]
            levels = self.edge_grid.get("altitude_levels")
            if not levels:
                levels = sorted({pa.alt_msl, pb.alt_msl})
            self.cache[key] = build_grid(
                dep=pa,
                arr=pb,
                n_slices=int(self.edge_grid.get("n_slices", 8)),
                n_vertices=int(self.edge_grid.get("n_vertices", 5)),
                altitude_levels=list(levels),
                lateral_halfwidth_m=self.edge_grid.get("lateral_halfwidth_m"),
                dem=self.env.dem,
                shift=bool(self.edge_grid.get("shift", False)),
                accessibility_margin_m=float(
                    self.edge_grid.get("accessibility_margin_m", 0.0)
                ),
            )
        return self.cache[key]

    def plan(self, a: str, b: str, t: float, soc: float) -> PlanResult:
        key = (a, b, round(float(t), 6), round(float(soc), 9))
        if key in self.cache:
            self.n_hit += 1
            return self.cache[key]
        grid = self._grid(a, b)
        res = optimize(
            grid,
            t,
            soc,
            self.params,
            self.cost_params,
            self.env,
            config=self.config,
            threads=self.threads,
        )
        self.cache[key] = res
        self.n_compute += 1
        return res

    def __call__(self, a: str, b: str, t: float, soc: float):
        res = self.plan(a, b, t, soc)
        if res.cancelled:
            return math.inf, 0.0, 0.0
        end = res.end_state()
        dsoc = (end.soc - soc) if end is not None else 0.0
        return res.total_cost, res.duration_s, dsoc


@dataclass
class MultigoalResult:
    order: list[str]
    plan: PlanResult
    scans: dict[str, ScanResult]
    search_cost: float
    n_heuristic: int
    n_naive: int
    expansions: list[dict]
    scan_time_ratio: float
    heuristic_used: bool
    infeasible_reasons: list[str] = field(default_factory=list)
    # scan metrics the search itself used (precomputed, time-independent)
    search_scan_time: dict[str, float] = field(default_factory=dict)
    search_scan_dsoc: dict[str, float] = field(default_factory=dict)

    def report(self) -> dict:
        return {
            "order": self.order,
            "search_cost": self.search_cost,
            "n_heuristic": self.n_heuristic,
            "n_naive": self.n_naive,
            "scan_time_ratio": self.scan_time_ratio,
            "heuristic_used": self.heuristic_used,
            "expansions": self.expansions,
        }

    def to_json(self, stride: int = 1) -> dict:
        return {
            "order": self.order,
            "plan": self.plan.to_json(stride),
            "scans": {k: v.to_json(stride) for k, v in self.scans.items()},
            "report": self.report(),
        }


def solve(
    start: GeoPoint,
    aois: list[AreaOfInterest],
    scan_params: ScanParams,
    params: AircraftParams,
    cost_params: CostParams,
    env: Environment,
    t0: float,
    soc0: float,
    edge_grid: dict | None = None,
    config: SimConfig | None = None,
    use_heuristic: bool = True,
    heuristic_horizon: tuple[float, float] | None = None,
    threads: int = 1,
) -> MultigoalResult:
    """Full multi-goal mission: scan metrics, heuristic, search, and stitching."""
    config = config or SimConfig()
    edge_grid = edge_grid or {}
    node_ids = [a.id for a in aois]
    graph = build_spp_graph(node_ids)

    anchors: dict[str, GeoPoint] = {START: start, GOAL: start}
    scans: dict[str, ScanResult] = {}
    scan_time: dict[str, float] = {}
    scan_dsoc: dict[str, float] = {}
    entry = AircraftState(position=start, time=t0, soc=soc0, v_air=params.v_air_opt)
    for aoi in aois:
        sr = optimize_scan(aoi, scan_params, entry, params, cost_params, env, config)
        scans[aoi.id] = sr
        scan_time[aoi.id] = sr.duration_s
        scan_dsoc[aoi.id] = sr.delta_soc
        c = aoi.centroid()
        anchors[aoi.id] = GeoPoint(c.lat, c.lon, sr.meta["alt_msl"])

    oracle = EdgeOracle(
        anchors=anchors,
        params=params,
        cost_params=cost_params,
        env=env,
        edge_grid=edge_grid,
        config=config,
        threads=threads,
    )

    if use_heuristic:
        ph = PointHeuristic(
            params=params,
            cost_params=cost_params,
            env=env,
            t_ref=t0,
            config=config,
            horizon=heuristic_horizon,
        )
        h_nm = point_heuristic_table(anchors, node_ids, ph)
        h_of = cost_to_go(graph, h_nm)
    else:
        h_of = lambda label: 0.0  # noqa: E731

    report = solve_order(graph, oracle, h_of, t0, soc0, scan_time, scan_dsoc)

    # stitch the chosen order with true arrival states; scans recalculated
    legs: list[PlanResult] = []
    final_scans: dict[str, ScanResult] = {}
    state_t, state_soc = t0, soc0
    prev = START
    waypoints: list[GeoPoint] = [start]
    times: list[float] = [t0]
    airspeeds: list[float] = [params.v_air_opt]
    traces = []
    for node in report.order + [GOAL]:
        leg = oracle.plan(prev, node, state_t, state_soc)
        if leg.cancelled:
            raise MissionInfeasibleError(
                f"stitching failed: leg {prev}->{node} cancelled",
                report.infeasible_reasons,
            )
        legs.append(leg)
        traces.append(leg.trace)
        waypoints.extend(leg.waypoints[1:])
        times.extend(leg.waypoint_times[1:])
        airspeeds.extend(
            leg.waypoint_airspeeds[1:]
            if len(leg.waypoint_airspeeds) == len(leg.waypoints)
            else [params.v_air_opt] * (len(leg.waypoints) - 1)
        )
        end = leg.end_state()
        state_t, state_soc = end.time, end.soc
        if node != GOAL:
            aoi = next(a for a in aois if a.id == node)
            entry = AircraftState(
                position=anchors[node], time=state_t, soc=state_soc,
                v_air=params.v_air_opt,
            )
            sr = optimize_scan(
                aoi, scan_params, entry, params, cost_params, env, config
            )
            final_scans[node] = sr
            traces.append(sr.trace)
            waypoints.extend(sr.path)
            times.extend(
                np.interp(
                    np.arange(len(sr.path), dtype=float),
                    [0, max(1, len(sr.path) - 1)],
                    [state_t, state_t + sr.duration_s],
                ).tolist()
            )
            airspeeds.extend([scan_params.airspeed] * len(sr.path))
            state_t = sr.trace.end_state.time
            state_soc = sr.trace.end_state.soc
        prev = node

    full = concat_traces(traces)
    breakdown = CostBreakdown.from_arrays(
        full.integrals, full.max_inputs, not full.feasible, full.cancel_term
    )
    distance = sum(
        great_circle_distance(a.lat, a.lon, b.lat, b.lon)
        for a, b in zip(waypoints[:-1], waypoints[1:])
    )
    socs = full.data[:, 4] if full.n_samples else np.array([soc0])
    plan = PlanResult(
        waypoints=waypoints,
        waypoint_times=times,
        trace=full,
        breakdown=breakdown,
        cancelled=not full.feasible,
        total_cost=float(full.integrals.sum()),
        duration_s=full.end_state.time - t0,
        distance_m=float(distance),
        min_soc=float(min(socs.min(), full.end_state.soc)),
        n_edge_evaluations=oracle.n_compute,
        grid_settings=dict(edge_grid),
        meta={"kind": "multigoal", "order": report.order},
        waypoint_airspeeds=airspeeds,
    )

    legs_time = sum(leg.duration_s for leg in legs)
    scans_time = sum(sr.duration_s for sr in final_scans.values())
    ratio = scans_time / legs_time if legs_time > 0 else math.inf
    return MultigoalResult(
        order=report.order,
        plan=plan,
        scans=final_scans,
        search_cost=report.total_cost,
        n_heuristic=oracle.n_compute,
        n_naive=report.n_naive,
        expansions=report.expansions,
        scan_time_ratio=ratio,
        heuristic_used=use_heuristic,
        infeasible_reasons=report.infeasible_reasons,
        search_scan_time=scan_time,
        search_scan_dsoc=scan_dsoc,
    )


# --- studies --------------------------------------------------------------------


def heuristic_quality_study(
    n_trials: int,
    seed: int,
    params: AircraftParams,
    cost_params: CostParams,
    env: Environment,
    edge_grid: dict | None = None,
    config: SimConfig | None = None,
    pair_km: tuple[float, float] = (10.0, 50.0),
) -> dict:
    """q = h/true-cost over randomized point pairs inside the weather mesh."""
    config = config or SimConfig()
    edge_grid = edge_grid or {"n_slices": 6, "n_vertices": 3}
    rng = np.random.default_rng(seed)
    wx = env.weather
    lat0, lat1 = float(wx.lat_axis[0]), float(wx.lat_axis[-1])
    lon0, lon1 = float(wx.lon_axis[0]), float(wx.lon_axis[-1])
    t0, t1 = float(wx.time_axis[0]), float(wx.time_axis[-1])
    alt = float(wx.alt_axis[0])

    ph = PointHeuristic(
        params=params, cost_params=cost_params, env=env, t_ref=t0, config=config
    )
    qs = []
    margin_lat = 0.2 * (lat1 - lat0)
    margin_lon = 0.2 * (lon1 - lon0)
    trials = 0
    while trials < n_trials:
        a = GeoPoint(
            rng.uniform(lat0 + margin_lat, lat1 - margin_lat),
            rng.uniform(lon0 + margin_lon, lon1 - margin_lon),
            alt,
        )
        d = rng.uniform(pair_km[0], pair_km[1]) * 1000.0
        bearing = rng.uniform(0.0, 360.0)
        from .geo import destination_point

        blat, blon = destination_point(a.lat, a.lon, bearing, d)
        b = GeoPoint(blat, blon, alt)
        if not (
            lat0 + 0.05 * (lat1 - lat0) < blat < lat1 - 0.05 * (lat1 - lat0)
            and lon0 + 0.05 * (lon1 - lon0) < blon < lon1 - 0.05 * (lon1 - lon0)
        ):
            continue
        t_dep = rng.uniform(t0, t0 + 0.5 * (t1 - t0))
        oracle = EdgeOracle(
            anchors={START: a, GOAL: b},
            params=params,
            cost_params=cost_params,
            env=env,
            edge_grid=edge_grid,
            config=config,
        )
        res = oracle.plan(START, GOAL, t_dep, 1.0)
        if res.cancelled:
            continue
        h = ph.leg(a, b)
        qs.append(h / res.total_cost)
        trials += 1
    qs = np.asarray(qs)
    return {
        "q": qs.tolist(),
        "mean": float(qs.mean()) if qs.size else float("nan"),
        "max": float(qs.max()) if qs.size else float("nan"),
        "n": int(qs.size),
    }


def forced_quality_eval_counts(
    n_nodes: int,
    quality: float,
    n_instances: int,
    seed: int,
) -> dict:
    """Edge-evaluation counts of the search on synthetic oracles whose
    heuristic is forced to a given quality (h = q * per-leg minimum cost)."""
    rng = np.random.default_rng(seed)
    counts = []
    for _ in range(n_instances):
        ids = [chr(ord("A") + i) for i in range(n_nodes)]
        pts = {nid: rng.uniform(0.0, 100.0, 2) for nid in ids}
        pts[START] = rng.uniform(0.0, 100.0, 2)
        pts[GOAL] = pts[START]
        phases = {}
        base = {}
        for a in pts:
            for b in pts:
                if a == b or b == START or a == GOAL:
                    continue
                d = float(np.hypot(*(pts[a] - pts[b]))) + 5.0
                base[(a, b)] = d * rng.uniform(0.9, 1.1)
                phases[(a, b)] = rng.uniform(0.0, 2.0 * math.pi)

        amp = 0.3

        def edge_fn(a, b, t, soc, _base=base, _ph=phases):
            c0 = _base[(a, b)]
            c = c0 * (1.0 + amp * math.sin(t / 900.0 + _ph[(a, b)]))
            return c, c * 60.0, 0.0

        h_nm = {k: quality * v * (1.0 - amp) for k, v in base.items()}
        graph = build_spp_graph(ids)
        h_of = cost_to_go(graph, h_nm)
        report = solve_order(
            graph, edge_fn, h_of, t0=0.0, soc0=1.0, scan_time={}, scan_dsoc={}
        )
        counts.append(report.n_evaluations)
    return {
        "n_nodes": n_nodes,
        "quality": quality,
        "counts": counts,
        "mean": float(np.mean(counts)),
        "n_naive": build_spp_graph(
            [chr(ord("A") + i) for i in range(n_nodes)]
        ).vertex_count(),
    }
