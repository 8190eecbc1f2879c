"""Mission persistence: one directory per mission, JSON documents only.

Layout under the workspace root:

    missions/<id>/record.json      append-only mission record
    missions/<id>/plans/<n>.json   PlanResult documents
    weather files                  referenced by workspace-relative paths
"""
from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..aircraft.simulate import AircraftState
from ..environment.grid import load_weather
from ..geo import GeoPoint
from ..mission import (
    MissionDef,
    MissionValidationError,
    parse_definition,
    run_launch_window,
    run_mission,
)
from ..planner.export import waypoints_json, waypoints_wpl
from ..planner.p2p import PlanResult, replan

STATUSES = ("draft", "planned", "flying", "replanned", "done", "infeasible")


@dataclass
class StateReport:
    timestamp: float
    position: GeoPoint
    soc: float
    v_air: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.soc <= 1.0:
            raise MissionValidationError(f"soc {self.soc} outside [0, 1]")

    @classmethod
    def from_json(cls, d: dict) -> "StateReport":
        return cls(
            timestamp=float(d["timestamp"]),
            position=GeoPoint(
                float(d["lat"]), float(d["lon"]), float(d.get("alt", 0.0))
            ),
            soc=float(d["soc"]),
            v_air=float(d["v_air"]) if d.get("v_air") is not None else None,
        )


@dataclass
class MissionRecord:
    id: str
    definition: dict
    status: str = "draft"
    weather_vintages: list[dict] = field(default_factory=list)
    plans: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "definition": self.definition,
            "status": self.status,
            "weather_vintages": self.weather_vintages,
            "plans": self.plans,
        }

    @classmethod
    def from_json(cls, d: dict) -> "MissionRecord":
        return cls(
            id=d["id"],
            definition=d["definition"],
            status=d.get("status", "draft"),
            weather_vintages=list(d.get("weather_vintages", [])),
            plans=list(d.get("plans", [])),
        )


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class MissionStore:
    """Filesystem-backed mission registry with per-record locking."""

    def __init__(self, workdir: str | Path):
        self.workdir = Path(workdir)
        (self.workdir / "missions").mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- locking -----------------------------------------------------------

    def _lock(self, mission_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(mission_id, threading.Lock())

    # -- paths --------------------------------------------------------------

    def _dir(self, mission_id: str) -> Path:
        return self.workdir / "missions" / mission_id

    def _record_path(self, mission_id: str) -> Path:
        return self._dir(mission_id) / "record.json"

    def resolve_weather(self, ref: str) -> Path:
        p = Path(ref)
        path = p if p.is_absolute() else self.workdir / p
        path = path.resolve()
        if not str(path).startswith(str(self.workdir.resolve())) and not p.is_absolute():
            raise MissionValidationError(f"weather ref escapes workspace: {ref}")
        if not path.exists():
            raise MissionValidationError(f"weather file not found: {ref}")
        return path

    # -- record I/O ------------------------------------------------------------

    def save_record(self, rec: MissionRecord) -> None:
        d = self._dir(rec.id)
        d.mkdir(parents=True, exist_ok=True)
        self._record_path(rec.id).write_text(_dump(rec.to_json()))

    def load_record(self, mission_id: str) -> MissionRecord:
        path = self._record_path(mission_id)
        if not path.exists():
            raise KeyError(f"no such mission: {mission_id}")
        return MissionRecord.from_json(json.loads(path.read_text()))

    def list_missions(self) -> list[dict]:
        out = []
        root = self.workdir / "missions"
        for p in sorted(root.glob("*/record.json")):
            rec = MissionRecord.from_json(json.loads(p.read_text()))
            out.append(
                {
                    "id": rec.id,
                    "status": rec.status,
                    "mission_type": rec.definition.get("mission_type"),
                    "name": rec.definition.get("name", rec.id),
                    "n_plans": len(rec.plans),
                }
            )
        return out

    # -- operations ---------------------------------------------------------------

    def create_mission(
        self, definition: dict, retrieved_at: float | None = None
    ) -> MissionRecord:
        md = parse_definition(definition, base_dir=self.workdir)
        existing = list((self.workdir / "missions").glob("m*"))
        mission_id = f"m{len(existing) + 1:04d}"
        rec = MissionRecord(id=mission_id, definition=definition)
        ref = definition["weather"]
        rec.weather_vintages.append(
            {
                "ref": ref,
                "retrieved_at": (
                    retrieved_at
                    if retrieved_at is not None
                    else md.weather_path.stat().st_mtime
                ),
            }
        )
        self.save_record(rec)
        return rec

    def parsed(self, rec: MissionRecord) -> MissionDef:
        return parse_definition(rec.definition, base_dir=self.workdir)

    def _append_plan(
        self,
        rec: MissionRecord,
        plan: PlanResult,
        kind: str,
        weather_ref: str,
        stride: int = 1,
        extra: dict | None = None,
    ) -> int:
        idx = len(rec.plans)
        plans_dir = self._dir(rec.id) / "plans"
        plans_dir.mkdir(parents=True, exist_ok=True)
        doc = plan.to_json(stride)
        if extra:
            doc["report"] = extra
        (plans_dir / f"{idx:04d}.json").write_text(_dump(doc))
        rec.plans.append(
            {
                "index": idx,
                "kind": kind,
                "weather_ref": weather_ref,
                "file": f"plans/{idx:04d}.json",
                "cancelled": plan.cancelled,
                "total_cost": None if math.isinf(plan.total_cost) else plan.total_cost,
                "duration_s": plan.duration_s,
                "min_soc": plan.min_soc,
                "departure_time": plan.departure_time,
            }
        )
        return idx

    def run_plan(
        self,
        mission_id: str,
        kind: str | None = None,
        t_depart: float | None = None,
        threads: int = 1,
        stride: int = 1,
    ) -> tuple[MissionRecord, int, PlanResult]:
        with self._lock(mission_id):
            rec = self.load_record(mission_id)
            md = self.parsed(rec)
            kind = kind or md.mission_type
            plan, extra = run_mission(md, kind=kind, t_depart=t_depart, threads=threads)
            idx = self._append_plan(
                rec,
                plan,
                kind,
                rec.definition["weather"],
                stride,
                extra.report() if extra is not None else None,
            )
            rec.status = "infeasible" if plan.cancelled else "planned"
            self.save_record(rec)
            return rec, idx, plan

    def run_launch_window(
        self,
        mission_id: str,
        window: tuple[float, float],
        step_s: float,
        threads: int = 1,
    ) -> dict:
        with self._lock(mission_id):
            rec = self.load_record(mission_id)
            md = self.parsed(rec)
            sweep = run_launch_window(md, window, step_s, threads=threads)
            d = self._dir(mission_id)
            sweeps = d / "sweeps"
            sweeps.mkdir(exist_ok=True)
            n = len(list(sweeps.glob("*.json")))
            (sweeps / f"{n:04d}.json").write_text(_dump(sweep))
            return sweep

    def submit_state_and_replan(
        self,
        mission_id: str,
        report: StateReport,
        weather_ref: str | None = None,
        retrieved_at: float | None = None,
        threads: int = 1,
        stride: int = 1,
    ) -> tuple[MissionRecord, int, PlanResult]:
        with self._lock(mission_id):
            rec = self.load_record(mission_id)
            md = self.parsed(rec)
            if not rec.plans:
                raise MissionValidationError("mission has no plan to replan from")
            ref = weather_ref or rec.weather_vintages[-1]["ref"]
            weather_path = self.resolve_weather(ref)
            if weather_ref is not None:
                rec.weather_vintages.append(
                    {
                        "ref": weather_ref,
                        "retrieved_at": (
                            retrieved_at
                            if retrieved_at is not None
                            else weather_path.stat().st_mtime
                        ),
                    }
                )
            prev_doc = json.loads(
                (self._dir(mission_id) / rec.plans[-1]["file"]).read_text()
            )
            prev = _plan_from_doc(prev_doc)
            env = md.environment(weather_path)
            state = AircraftState(
                position=report.position,
                time=report.timestamp,
                soc=report.soc,
                v_air=report.v_air or md.aircraft.v_air_opt,
            )
            plan = replan(
                prev,
                state,
                env,
                md.aircraft,
                md.cost,
                dem=env.dem,
                config=md.sim,
                threads=threads,
            )
            idx = self._append_plan(rec, plan, "replan", ref, stride)
            rec.status = "infeasible" if plan.cancelled else "replanned"
            self.save_record(rec)
            return rec, idx, plan

    def get_plan_doc(self, mission_id: str, index: int) -> dict:
        rec = self.load_record(mission_id)
        if not 0 <= index < len(rec.plans):
            raise KeyError(f"mission {mission_id} has no plan {index}")
        return json.loads(
            (self._dir(mission_id) / rec.plans[index]["file"]).read_text()
        )

    def export_waypoints(self, mission_id: str, index: int, fmt: str) -> str:
        doc = self.get_plan_doc(mission_id, index)
        plan = _plan_from_doc(doc)
        if not plan.waypoints:
            raise MissionValidationError("plan has no waypoints to export")
        if fmt == "qgc_wpl":
            return waypoints_wpl(plan)
        if fmt == "json":
            return json.dumps(waypoints_json(plan), sort_keys=True)
        raise MissionValidationError(f"unknown waypoint format {fmt!r}")

    def weather_slice(
        self,
        ref: str,
        fieldname: str,
        time: float,
        alt: float | None = None,
        stride: int = 1,
    ) -> dict:
        path = self.resolve_weather(ref)
        wx = load_weather(path)
        stride = max(1, int(stride))
        lats = wx.lat_axis[::stride]
        lons = wx.lon_axis[::stride]
        wt, wa, wla, wlo, _steps, f3, f2 = wx.pack()
        names3 = ("temperature", "relative_humidity", "wind_east", "wind_north")
        names2 = ("gust", "precipitation", "cape", "radiation_total", "radiation_direct")
        it = int(np.argmin(np.abs(wt - time)))
        if fieldname in names3:
            ia = 0 if alt is None else int(np.argmin(np.abs(wa - alt)))
            values = f3[names3.index(fieldname), it, ia, ::stride, ::stride]
            level = float(wa[ia])
        elif fieldname in names2:
            values = f2[names2.index(fieldname), it, ::stride, ::stride]
            level = None
        else:
            raise MissionValidationError(f"unknown weather field {fieldname!r}")
        return {
            "field": fieldname,
            "time": float(wt[it]),
            "alt": level,
            "lats": [float(v) for v in lats],
            "lons": [float(v) for v in lons],
            "values": [[float(v) for v in row] for row in values],
            "units_note": "rates for accumulated fields",
        }


def _plan_from_doc(doc: dict) -> PlanResult:
    """Rehydrate the PlanResult fields replan/export need from a stored doc."""
    wps = [GeoPoint(w["lat"], w["lon"], w["alt"]) for w in doc["waypoints"]]
    times = [float(w["time"]) for w in doc["waypoints"]]
    airspeeds = [
        float(w["v_air"]) for w in doc["waypoints"] if w.get("v_air") is not None
    ]
    if len(airspeeds) != len(wps):
        airspeeds = []
    from ..cost import CostBreakdown

    return PlanResult(
        waypoints=wps,
        waypoint_times=times,
        trace=None,
        breakdown=CostBreakdown.from_json(doc["breakdown"]),
        cancelled=bool(doc["cancelled"]),
        total_cost=(
            math.inf if doc.get("total_cost") is None else float(doc["total_cost"])
        ),
        duration_s=float(doc["duration_s"]),
        distance_m=float(doc["distance_m"]),
        min_soc=float(doc["min_soc"]),
        node_path=[tuple(n) for n in doc.get("node_path", [])],
        n_edge_evaluations=int(doc.get("n_edge_evaluations", 0)),
        grid_settings=doc.get("grid_settings", {}),
        meta=doc.get("meta", {}),
        waypoint_airspeeds=airspeeds,
    )
