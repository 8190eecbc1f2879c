"""3-D planning grid between departure and arrival points.

Slices sit at equal fractions along the dep->arr orthodrome; each interior
slice spreads vertices perpendicular to the local course, optionally
shifted sideways so as many vertices as possible fall over accessible
terrain (below a configurable elevation ceiling).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..environment.grid import WeatherGrid
from ..environment.terrain import Dem
from ..geo import (
    GeoPoint,
    destination_point,
    great_circle_distance,
    initial_bearing,
    intermediate_point,
)


class GridBuildError(ValueError):
    pass


@dataclass
class PlanningGrid:
    """Ordered slices of candidate vertices; endpoints are single points."""

    dep: GeoPoint
    arr: GeoPoint
    slice_points: list[np.ndarray]  # per slice: [n_vertices_i, 2] (lat, lon)
    altitude_levels: list[float]
    lateral_halfwidth_m: float
    shifts_m: list[float]
    meta: dict = field(default_factory=dict)

    @property
    def n_slices(self) -> int:
        return len(self.slice_points)

    def n_vertices(self, i: int) -> int:
        return self.slice_points[i].shape[0]

    def levels_at(self, i: int) -> list[float]:
        if i == 0:
            return [self.dep.alt_msl]
        if i == self.n_slices - 1:
            return [self.arr.alt_msl]
        return self.altitude_levels

    def point(self, i: int, j: int, k: int) -> GeoPoint:
        lat, lon = self.slice_points[i][j]
        return GeoPoint(float(lat), float(lon), float(self.levels_at(i)[k]))

    def path_combinations(self) -> int:
        total = 1
        for i in range(1, self.n_slices - 1):
            total *= self.n_vertices(i) * len(self.altitude_levels)
        return total

    def settings(self) -> dict:
        return {
            "n_slices": self.n_slices,
            "n_vertices": int(
                max(self.n_vertices(i) for i in range(self.n_slices))
            ),
            "altitude_levels": list(self.altitude_levels),
            "lateral_halfwidth_m": self.lateral_halfwidth_m,
            "shift": bool(self.meta.get("shift", False)),
            "accessibility_margin_m": self.meta.get("accessibility_margin_m", 0.0),
        }


def _accessible_count(
    center_lat: float,
    center_lon: float,
    perp_bearing: float,
    offsets: np.ndarray,
    shift: float,
    dem: Dem,
    ceiling: float,
) -> int:
    count = 0
    dlat, dlon, delev = dem.pack()
    from .. import kernels as K

    for off in offsets:
        lat, lon = destination_point(center_lat, center_lon, perp_bearing, off + shift)
        st, elev = K.interp_dem(dlat, dlon, delev, lat, lon)
        if st != K.ST_OK:
            elev = 0.0
        if elev <= ceiling:
            count += 1
    return count


def build_grid(
    dep: GeoPoint,
    arr: GeoPoint,
    n_slices: int,
    n_vertices: int,
    altitude_levels: list[float],
    lateral_halfwidth_m: float | None = None,
    dem: Dem | None = None,
    weather: WeatherGrid | None = None,
    shift: bool = True,
    accessibility_margin_m: float = 0.0,
) -> PlanningGrid:
    """Construct the planning grid; raises GridBuildError on bad geometry."""
    if n_slices < 2:
        raise GridBuildError("need at least 2 slices (departure and arrival)")
    if n_vertices < 1:
        raise GridBuildError("need at least 1 vertex per slice")
    if not altitude_levels:
        raise GridBuildError("need at least one altitude level")
    levels = sorted(float(a) for a in altitude_levels)

    dist = great_circle_distance(dep.lat, dep.lon, arr.lat, arr.lon)
    if lateral_halfwidth_m is None:
        lateral_halfwidth_m = 0.15 * dist

    fractions = np.linspace(0.0, 1.0, n_slices)
    centers = [
        intermediate_point(dep.lat, dep.lon, arr.lat, arr.lon, float(f))
        for f in fractions
    ]

    if n_vertices > 1:
        offsets = np.linspace(-lateral_halfwidth_m, lateral_halfwidth_m, n_vertices)
    else:
        offsets = np.zeros(1)

    ceiling = max(levels) - accessibility_margin_m
    candidate_shifts = np.linspace(
        -lateral_halfwidth_m / 2.0, lateral_halfwidth_m / 2.0, 11
    )
    # deterministic preference for the smallest |shift| on count ties
    candidate_shifts = np.array(
        sorted(candidate_shifts, key=lambda s: (abs(s), s))
    )

    slice_points: list[np.ndarray] = []
    shifts: list[float] = []
    for i, (clat, clon) in enumerate(centers):
        if i == 0 or i == n_slices - 1:
            slice_points.append(np.array([[clat, clon]]))
            shifts.append(0.0)
            continue
        nlat, nlon = centers[i + 1]
        plat, plon = centers[i - 1]
        course = initial_bearing(plat, plon, nlat, nlon)
        perp = (course + 90.0) % 360.0

        best_shift = 0.0
        if shift and dem is not None and n_vertices > 1:
            best_count = -1
            for s in candidate_shifts:
                c = _accessible_count(clat, clon, perp, offsets, float(s), dem, ceiling)
                if c > best_count:
                    best_count = c
                    best_shift = float(s)
                if best_count == n_vertices:
                    break
        pts = np.array(
            [
                destination_point(clat, clon, perp, float(off) + best_shift)
                for off in offsets
            ]
        )
        slice_points.append(pts)
        shifts.append(best_shift)

    grid = PlanningGrid(
        dep=dep,
        arr=arr,
        slice_points=slice_points,
        altitude_levels=levels,
        lateral_halfwidth_m=float(lateral_halfwidth_m),
        shifts_m=shifts,
        meta={
            "shift": shift,
            "accessibility_margin_m": accessibility_margin_m,
            "distance_m": dist,
        },
    )

    if weather is not None:
        for i in range(grid.n_slices):
            for j in range(grid.n_vertices(i)):
                lat, lon = grid.slice_points[i][j]
                for alt in grid.levels_at(i):
                    if not weather.contains(float(lat), float(lon), float(alt), float(weather.time_axis[0])):
                        raise GridBuildError(
                            f"grid vertex (slice {i}, vertex {j}, alt {alt}) "
                            f"outside weather domain"
                        )
    return grid
