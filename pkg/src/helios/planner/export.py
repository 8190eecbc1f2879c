"""PlanResult serialization and waypoint export (QGC WPL 110 / JSON)."""
from __future__ import annotations

import json
from pathlib import Path

from .p2p import PlanResult

MAV_CMD_NAV_WAYPOINT = 16
MAV_FRAME_GLOBAL_ALT = 0


def plan_to_json_text(plan: PlanResult, stride: int = 1) -> str:
    return json.dumps(plan.to_json(stride), sort_keys=True, indent=None)


def save_plan(path: str | Path, plan: PlanResult, stride: int = 1) -> None:
    Path(path).write_text(plan_to_json_text(plan, stride))


def waypoints_json(plan: PlanResult, decimate: int = 1) -> list[dict]:
    if not plan.waypoints:
        raise ValueError("plan has no waypoints")
    step = max(1, decimate)
    indices = list(range(0, len(plan.waypoints), step))
    if indices[-1] != len(plan.waypoints) - 1:
        indices.append(len(plan.waypoints) - 1)
    return [
        {
            "seq": seq,
            "lat": plan.waypoints[i].lat,
            "lon": plan.waypoints[i].lon,
            "alt": plan.waypoints[i].alt_msl,
            "time": plan.waypoint_times[i],
            "v_air": plan.airspeed_at(i),
        }
        for seq, i in enumerate(indices)
    ]


def waypoints_wpl(plan: PlanResult, decimate: int = 1) -> str:
    """Plain-text QGC WPL 110 mission file."""
    wps = waypoints_json(plan, decimate)
    lines = ["QGC WPL 110"]
    for wp in wps:
        current = 1 if wp["seq"] == 0 else 0
        lines.append(
            "\t".join(
                str(v)
                for v in (
                    wp["seq"],
                    current,
                    MAV_FRAME_GLOBAL_ALT,
                    MAV_CMD_NAV_WAYPOINT,
                    0.0,
                    0.0,
                    0.0,
                    0.0,
                    f"{wp['lat']:.7f}",
                    f"{wp['lon']:.7f}",
                    f"{wp['alt']:.1f}",
                    1,
                )
            )
        )
    return "\n".join(lines) + "\n"
