"""Lawn-mower coverage scans over convex polygonal areas of interest.

Sweep-line geometry runs in a local east/north frame around the polygon
centroid; candidate course angles and start corners are simulated with the
full system model and the cheapest combination wins.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .aircraft.params import AircraftParams
from .aircraft.simulate import (
    AircraftState,
    Environment,
    SegmentTrace,
    SimConfig,
    concat_traces,
    simulate_loiter,
    simulate_segment,
)
from .cost import CostBreakdown, CostParams
from .environment.terrain import terrain_elevation
from .geo import GeoPoint, enu_of, local_enu_offset


class ScanInfeasibleError(RuntimeError):
    """Every (course, corner) candidate was cancelled by the cost limits."""


@dataclass
class AreaOfInterest:
    id: str
    vertices: list[GeoPoint]  # convex ring, any orientation
    scan_alt_agl: float

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        if not self._is_convex():
            raise ValueError(f"area '{self.id}' is not convex")

    def _enu_ring(self) -> np.ndarray:
        c = self.centroid()
        return np.array([enu_of(v.lat, v.lon, c.lat, c.lon) for v in self.vertices])

    def _is_convex(self) -> bool:
        pts = self._enu_ring()
        n = len(pts)
        sign = 0.0
        for i in range(n):
            a = pts[i]
            b = pts[(i + 1) % n]
            c = pts[(i + 2) % n]
            cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if abs(cross) < 1e-9:
                continue
            if sign == 0.0:
                sign = math.copysign(1.0, cross)
            elif math.copysign(1.0, cross) != sign:
                return False
        return True

    def centroid(self) -> GeoPoint:
        lat = sum(v.lat for v in self.vertices) / len(self.vertices)
        lon = sum(v.lon for v in self.vertices) / len(self.vertices)
        return GeoPoint(lat, lon, 0.0)

    def area_m2(self) -> float:
        pts = self._enu_ring()
        x = pts[:, 0]
        y = pts[:, 1]
        return 0.5 * abs(
            float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
        )

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "vertices": [[v.lat, v.lon] for v in self.vertices],
            "scan_alt_agl": self.scan_alt_agl,
        }

    @classmethod
    def from_json(cls, d: dict) -> "AreaOfInterest":
        return cls(
            id=str(d["id"]),
            vertices=[GeoPoint(v[0], v[1]) for v in d["vertices"]],
            scan_alt_agl=float(d["scan_alt_agl"]),
        )


@dataclass
class ScanParams:
    camera_fov_lateral: float  # degrees
    lateral_overlap: float  # [0, 1)
    airspeed: float  # m/s
    turn_radius: float  # m
    course_angle_step: float = 5.0

    def __post_init__(self):
        if not 0.0 < self.camera_fov_lateral < 180.0:
            raise ValueError("camera_fov_lateral must be in (0, 180)")
        if not 0.0 <= self.lateral_overlap < 1.0:
            raise ValueError("lateral_overlap must be in [0, 1)")
        if self.turn_radius <= 0:
            raise ValueError("turn_radius must be positive")


@dataclass
class ScanResult:
    aoi_id: str
    path: list[GeoPoint]  # pairs (2i, 2i+1) are sweep-line passes
    course: float
    start_corner: int
    length_m: float
    duration_s: float
    breakdown: CostBreakdown
    delta_soc: float
    coverage: float
    trace: SegmentTrace | None = None
    meta: dict = field(default_factory=dict)

    def to_json(self, stride: int = 1) -> dict:
        return {
            "aoi_id": self.aoi_id,
            "path": [[p.lat, p.lon, p.alt_msl] for p in self.path],
            "course": self.course,
            "start_corner": self.start_corner,
            "length_m": self.length_m,
            "duration_s": self.duration_s,
            "breakdown": self.breakdown.to_json(),
            "delta_soc": self.delta_soc,
            "coverage": self.coverage,
            "trace": None if self.trace is None else self.trace.to_json(stride),
            "meta": self.meta,
        }


def footprint_spacing(alt_agl: float, fov_deg: float, overlap: float) -> float:
    """Sweep-line spacing from the camera swath and the requested overlap."""
    swath = 2.0 * alt_agl * math.tan(math.radians(fov_deg) / 2.0)
    return swath * (1.0 - overlap)


def footprint_swath(alt_agl: float, fov_deg: float) -> float:
    return 2.0 * alt_agl * math.tan(math.radians(fov_deg) / 2.0)


def _course_frame(course_deg: float) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors (along-line, across-line) of a compass course in ENU."""
    c = math.radians(course_deg)
    u = np.array([math.sin(c), math.cos(c)])  # along
    p = np.array([math.cos(c), -math.sin(c)])  # across (course + 90 deg)
    return u, p


def _clip_line(pts: np.ndarray, q: float, u: np.ndarray, p: np.ndarray):
    """Intersect the across-line {x: x.p == q} with the convex polygon.

    Returns (s_lo, s_hi) in along-coordinates, or None when the line misses.
    """
    n = len(pts)
    svals = []
    for i in range(n):
        a = pts[i]
        b = pts[(i + 1) % n]
        qa = float(np.dot(a, p))
        qb = float(np.dot(b, p))
        if abs(qb - qa) < 1e-12:
            if abs(qa - q) < 1e-9:
                svals.extend([float(np.dot(a, u)), float(np.dot(b, u))])
            continue
        t = (q - qa) / (qb - qa)
        if -1e-9 <= t <= 1.0 + 1e-9:
            x = a + t * (b - a)
            svals.append(float(np.dot(x, u)))
    if len(svals) < 2:
        return None
    return min(svals), max(svals)


def _strip_extent(pts: np.ndarray, q: float, half: float, u: np.ndarray, p: np.ndarray):
    """Along-axis extent of the polygon over the strip q +- half.

    The sweep line must span the whole strip it covers, or slanted corners
    would sit diagonally beyond the swath.  Convexity makes the extremes
    occur at strip-border clips or at vertices inside the strip.
    """
    svals = []
    for qq in (q - half, q, q + half):
        seg = _clip_line(pts, qq, u, p)
        if seg is not None:
            svals.extend(seg)
    qv = pts @ p
    sv = pts @ u
    inside = np.abs(qv - q) <= half + 1e-9
    svals.extend(sv[inside].tolist())
    if len(svals) < 2:
        return None
    return min(svals), max(svals)


def generate_lawnmower(
    aoi: AreaOfInterest,
    course: float,
    start_corner: int,
    spacing: float,
    alt_msl: float | None = None,
) -> list[GeoPoint]:
    """Waypoints of the sweep pattern: two points per line, lines in flight order."""
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    centroid = aoi.centroid()
    pts = aoi._enu_ring()
    u, p = _course_frame(course)
    q_all = pts @ p
    s_all = pts @ u
    qmin, qmax = float(q_all.min()), float(q_all.max())
    width = qmax - qmin

    corner = pts[start_corner % len(pts)]
    q_c = float(np.dot(corner, p))
    s_c = float(np.dot(corner, u))
    from_max_side = abs(q_c - qmax) < abs(q_c - qmin)

    if width < spacing / 2.0:
        qs = [0.5 * (qmin + qmax)]
    else:
        count = max(1, math.ceil(width / spacing - 1e-9))
        if count == 1:
            qs = [0.5 * (qmin + qmax)]
        elif from_max_side:
            qs = [qmax - spacing / 2.0 - i * spacing for i in range(count)]
        else:
            qs = [qmin + spacing / 2.0 + i * spacing for i in range(count)]

    alt = alt_msl if alt_msl is not None else aoi.scan_alt_agl
    waypoints: list[GeoPoint] = []
    forward_from_corner = None
    for i, q in enumerate(qs):
        seg = _strip_extent(pts, q, spacing / 2.0, u, p)
        if seg is None:
            continue
        s_lo, s_hi = seg
        if forward_from_corner is None:
            # first line starts at the end nearest the start corner
            forward_from_corner = abs(s_c - s_lo) <= abs(s_c - s_hi)
        forward = forward_from_corner if i % 2 == 0 else not forward_from_corner
        s_pair = (s_lo, s_hi) if forward else (s_hi, s_lo)
        for s in s_pair:
            e, n = (u * s + p * q).tolist()
            lat, lon = local_enu_offset(centroid.lat, centroid.lon, e, n)
            waypoints.append(GeoPoint(lat, lon, alt))
    return waypoints


def verify_coverage(aoi: AreaOfInterest, path: list[GeoPoint], swath: float) -> float:
    """Fraction of the polygon within swath/2 of a sweep-line pass.

    Rasterizes at <= swath/20; pairs (2i, 2i+1) of `path` are the passes.
    """
    if not path:
        return 0.0
    centroid = aoi.centroid()
    pts = aoi._enu_ring()
    cell = max(swath / 20.0, 1e-3)
    xmin, ymin = pts.min(axis=0) - cell
    xmax, ymax = pts.max(axis=0) + cell
    xs = np.arange(xmin + cell / 2.0, xmax, cell)
    ys = np.arange(ymin + cell / 2.0, ymax, cell)
    gx, gy = np.meshgrid(xs, ys)
    px = gx.ravel()
    py = gy.ravel()

    # point-in-convex-polygon: consistent cross-product sign over all edges
    inside = np.ones(px.shape, dtype=bool)
    n = len(pts)
    area2 = 0.0
    for i in range(n):
        a = pts[i]
        b = pts[(i + 1) % n]
        area2 += a[0] * b[1] - b[0] * a[1]
    orient = 1.0 if area2 > 0 else -1.0
    for i in range(n):
        a = pts[i]
        b = pts[(i + 1) % n]
        cross = (b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0])
        inside &= orient * cross >= -1e-9
    if not inside.any():
        return 0.0

    covered = np.zeros(px.shape, dtype=bool)
    half = swath / 2.0
    segs = [
        (path[i], path[i + 1]) for i in range(0, len(path) - 1, 2)
    ]
    for a_pt, b_pt in segs:
        ax, ay = enu_of(a_pt.lat, a_pt.lon, centroid.lat, centroid.lon)
        bx, by = enu_of(b_pt.lat, b_pt.lon, centroid.lat, centroid.lon)
        dx, dy = bx - ax, by - ay
        ll = dx * dx + dy * dy
        if ll < 1e-12:
            dist2 = (px - ax) ** 2 + (py - ay) ** 2
        else:
            t = ((px - ax) * dx + (py - ay) * dy) / ll
            t = np.clip(t, 0.0, 1.0)
            dist2 = (px - (ax + t * dx)) ** 2 + (py - (ay + t * dy)) ** 2
        covered |= dist2 <= half * half
    return float(np.count_nonzero(covered & inside) / np.count_nonzero(inside))


def _simulate_scan_path(
    waypoints: list[GeoPoint],
    spacing: float,
    sp: ScanParams,
    entry: AircraftState,
    params: AircraftParams,
    cp: CostParams,
    env: Environment,
    config: SimConfig,
) -> tuple[SegmentTrace | None, float]:
    """Fly lines and 180-degree turns; returns (stitched trace, length flown)."""
    # sweep lines are far shorter than route legs: integrate finely enough
    # to see weather variation within a line and to resolve each turn
    dt_scan = min(config.dt, 15.0)
    scan_cfg = replace(
        config, dt=dt_scan, allow_speedup=False, fixed_v_air=sp.airspeed
    )
    turn_r = max(sp.turn_radius, spacing / 2.0)
    turn_duration = math.pi * turn_r / sp.airspeed
    traces = []
    length = 0.0
    state = AircraftState(
        position=waypoints[0], time=entry.time, soc=entry.soc, v_air=sp.airspeed
    )
    n_lines = len(waypoints) // 2
    for i in range(n_lines):
        a = waypoints[2 * i]
        b = waypoints[2 * i + 1]
        seg = simulate_segment(params, state, b, env, cp, config=scan_cfg)
        traces.append(seg)
        if not seg.feasible:
            return concat_traces(traces), length
        from .geo import great_circle_distance

        length += great_circle_distance(a.lat, a.lon, b.lat, b.lon)
        state = seg.end_state
        if i < n_lines - 1:
            turn = simulate_loiter(
                params, state, turn_duration, env, cp, config=scan_cfg
            )
            traces.append(turn)
            if not turn.feasible:
                return concat_traces(traces), length
            length += math.pi * turn_r
            nxt = waypoints[2 * i + 2]
            state = AircraftState(
                position=nxt,
                time=turn.end_state.time,
                soc=turn.end_state.soc,
                v_air=sp.airspeed,
            )
    return concat_traces(traces), length


def optimize_scan(
    aoi: AreaOfInterest,
    sp: ScanParams,
    entry: AircraftState,
    params: AircraftParams,
    cp: CostParams,
    env: Environment,
    config: SimConfig | None = None,
) -> ScanResult:
    """Search course angles and start corners for the cheapest covering scan."""
    config = config or SimConfig()
    centroid = aoi.centroid()
    terrain = 0.0
    if env.dem is not None and env.dem.contains(centroid.lat, centroid.lon):
        terrain = terrain_elevation(env.dem, centroid)
    alt_msl = terrain + aoi.scan_alt_agl
    spacing = footprint_spacing(aoi.scan_alt_agl, sp.camera_fov_lateral, sp.lateral_overlap)
    swath = footprint_swath(aoi.scan_alt_agl, sp.camera_fov_lateral)

    # candidates within a relative tolerance count as ties; the earliest
    # (smallest course, then corner) wins, keeping symmetric cases stable
    tie_rel = 1e-4
    best = None  # (cost, course, corner, waypoints, trace, length)
    courses = np.arange(0.0, 180.0, sp.course_angle_step)
    for course in courses:
        for corner in range(len(aoi.vertices)):
            waypoints = generate_lawnmower(aoi, float(course), corner, spacing, alt_msl)
            if not waypoints:
                continue
            trace, length = _simulate_scan_path(
                waypoints, spacing, sp, entry, params, cp, env, config
            )
            if trace is None or not trace.feasible:
                continue
            cost = trace.total_cost()
            if best is None or cost < best[0] * (1.0 - tie_rel):
                best = (cost, float(course), corner, waypoints, trace, length)

    if best is None:
        raise ScanInfeasibleError(
            f"all scan candidates for area '{aoi.id}' were cancelled"
        )
    cost, course, corner, waypoints, trace, length = best
    coverage = verify_coverage(aoi, waypoints, swath)
    breakdown = CostBreakdown.from_arrays(
        trace.integrals, trace.max_inputs, False, None
    )
    return ScanResult(
        aoi_id=aoi.id,
        path=waypoints,
        course=course,
        start_corner=corner,
        length_m=length,
        duration_s=trace.duration,
        breakdown=breakdown,
        delta_soc=trace.end_state.soc - entry.soc,
        coverage=coverage,
        trace=trace,
        meta={"spacing_m": spacing, "swath_m": swath, "alt_msl": alt_msl},
    )
