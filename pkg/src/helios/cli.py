"""Command-line frontend for the full planning workflow."""
from __future__ import annotations

import csv
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from .aircraft.params import load_aircraft
from .aircraft.simulate import Environment, SimConfig
from .cost import load_cost_params
from .environment.grid import load_weather, save_weather
from .environment.synth import synth_weather
from .environment.terrain import load_dem
from .geo import GeoPoint
from .mission import parse_definition, run_launch_window, run_mission
from .planner.export import save_plan, waypoints_json, waypoints_wpl
from .planner.grid import build_grid
from .planner.p2p import optimize
from .multigoal import forced_quality_eval_counts, heuristic_quality_study


def parse_time(text: str) -> float:
    """Unix seconds from a float literal or an ISO-8601 UTC timestamp."""
    try:
        return float(text)
    except ValueError:
        pass
    t = text.replace("Z", "+00:00")
    dt = datetime.fromisoformat(t)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def parse_point(text: str) -> GeoPoint:
    parts = [float(v) for v in text.split(",")]
    if len(parts) == 2:
        parts.append(0.0)
    if len(parts) != 3:
        raise click.BadParameter("expected lat,lon[,alt]")
    return GeoPoint(parts[0], parts[1], parts[2])


def _fail(ctx: click.Context, exc: Exception) -> None:
    if ctx.obj.get("json"):
        sys.stderr.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
        )
    else:
        sys.stderr.write(f"error: {exc}\n")
    sys.exit(1)


@click.group()
@click.option("--json", "json_out", is_flag=True, help="machine-readable stderr errors")
@click.option("--threads", default=1, show_default=True, help="planner worker threads")
@click.option("--seed", default=0, show_default=True, help="seed for randomized studies")
@click.option(
    "--workdir",
    default=None,
    help="workspace directory (default: $HELIOS_WORKDIR or '.')",
)
@click.pass_context
def main(ctx, json_out, threads, seed, workdir):
    """Mission planning toolkit for solar-powered fixed-wing UAVs."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = json_out
    ctx.obj["threads"] = threads
    ctx.obj["seed"] = seed
    ctx.obj["workdir"] = Path(workdir or os.environ.get("HELIOS_WORKDIR", "."))


# -- weather -------------------------------------------------------------------


@main.group()
def weather():
    """Synthesize and inspect gridded weather files."""


@weather.command("synth")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.pass_context
def weather_synth(ctx, spec_path, output):
    """Generate a deterministic synthetic weather file from a JSON spec."""
    try:
        spec = json.loads(Path(spec_path).read_text())
        grid = synth_weather(spec)
        save_weather(output, grid)
    except Exception as exc:
        _fail(ctx, exc)
    click.echo(f"wrote {output}")


@weather.command("info")
@click.argument("path", type=click.Path(exists=True))
@click.pass_context
def weather_info(ctx, path):
    """Print axes and field summary of a weather file."""
    try:
        wx = load_weather(path)
    except Exception as exc:
        _fail(ctx, exc)
        return
    info = {
        "time": [float(wx.time_axis[0]), float(wx.time_axis[-1])],
        "n_time": int(wx.time_axis.size),
        "alt": [float(wx.alt_axis[0]), float(wx.alt_axis[-1])],
        "n_alt": int(wx.alt_axis.size),
        "lat": [float(wx.lat_axis[0]), float(wx.lat_axis[-1])],
        "n_lat": int(wx.lat_axis.size),
        "lon": [float(wx.lon_axis[0]), float(wx.lon_axis[-1])],
        "n_lon": int(wx.lon_axis.size),
        "accumulation_step_s": wx.accumulation_step_s,
        "fields_3d": sorted(wx.fields3d),
        "fields_2d": sorted(wx.fields2d),
    }
    click.echo(json.dumps(info, indent=2, sort_keys=True))


# -- planning ------------------------------------------------------------------


def _load_env(weather_path, dem_path) -> Environment:
    wx = load_weather(weather_path)
    dem = load_dem(dem_path) if dem_path else None
    return Environment(weather=wx, dem=dem)


def _sim_config(dt, floor, climb) -> SimConfig:
    return SimConfig(dt=dt, v_gnd_floor=floor, max_climb_angle_deg=climb)


_common_plan_options = [
    click.option("--aircraft", "aircraft_src", required=True, help="preset name or JSON file"),
    click.option("--costs", "costs_src", required=True, help="preset name or JSON file"),
    click.option("--weather", "weather_path", required=True, type=click.Path(exists=True)),
    click.option("--dem", "dem_path", default=None, type=click.Path(exists=True)),
    click.option("--dt", default=600.0, show_default=True),
    click.option("--vgnd-floor", default=2.0, show_default=True),
    click.option("--max-climb-angle", default=3.0, show_default=True),
]


def common_plan_options(fn):
    for opt in reversed(_common_plan_options):
        fn = opt(fn)
    return fn


@main.command("plan")
@common_plan_options
@click.option("--from", "from_", required=True, help="departure lat,lon,alt")
@click.option("--to", "to_", required=True, help="arrival lat,lon,alt")
@click.option("--depart", required=True, help="departure time (unix or ISO-8601)")
@click.option("--soc", default=1.0, show_default=True)
@click.option("--slices", default=10, show_default=True)
@click.option("--vertices", default=5, show_default=True)
@click.option("--levels", default=None, help="comma-separated altitude levels [m]")
@click.option("--halfwidth-km", default=None, type=float)
@click.option("--stride", default=1, show_default=True, help="trace decimation in output")
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--wpl", default=None, type=click.Path(), help="also write QGC WPL file")
@click.pass_context
def plan_cmd(
    ctx, aircraft_src, costs_src, weather_path, dem_path, dt, vgnd_floor,
    max_climb_angle, from_, to_, depart, soc, slices, vertices, levels,
    halfwidth_km, stride, output, wpl,
):
    """Point-to-point route optimization."""
    try:
        params = load_aircraft(aircraft_src)
        cp = load_cost_params(costs_src)
        env = _load_env(weather_path, dem_path)
        dep = parse_point(from_)
        arr = parse_point(to_)
        lv = (
            [float(v) for v in levels.split(",")]
            if levels
            else [dep.alt_msl]
        )
        grid = build_grid(
            dep,
            arr,
            slices,
            vertices,
            lv,
            lateral_halfwidth_m=halfwidth_km * 1000.0 if halfwidth_km else None,
            dem=env.dem,
            weather=env.weather,
            shift=env.dem is not None,
        )
        plan = optimize(
            grid,
            parse_time(depart),
            soc,
            params,
            cp,
            env,
            config=_sim_config(dt, vgnd_floor, max_climb_angle),
            threads=ctx.obj["threads"],
        )
        save_plan(output, plan, stride)
        if wpl:
            Path(wpl).write_text(waypoints_wpl(plan))
    except Exception as exc:
        _fail(ctx, exc)
        return
    click.echo(
        json.dumps(
            {
                "output": output,
                "cancelled": plan.cancelled,
                "duration_h": plan.duration_s / 3600.0,
                "distance_km": plan.distance_m / 1000.0,
                "total_cost": None if math.isinf(plan.total_cost) else plan.total_cost,
                "min_soc": plan.min_soc,
            },
            sort_keys=True,
        )
    )


@main.command("loiter")
@common_plan_options
@click.option("--at", "at_", required=True, help="loiter position lat,lon,alt")
@click.option("--depart", required=True)
@click.option("--hours", required=True, type=float)
@click.option("--soc", default=1.0, show_default=True)
@click.option("--stride", default=1, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path())
@click.pass_context
def loiter_cmd(
    ctx, aircraft_src, costs_src, weather_path, dem_path, dt, vgnd_floor,
    max_climb_angle, at_, depart, hours, soc, stride, output,
):
    """Station-keeping energetic feasibility (no route search)."""
    try:
        from .mission import MissionDef, loiter_plan_result

        params = load_aircraft(aircraft_src)
        cp = load_cost_params(costs_src)
        env = _load_env(weather_path, dem_path)
        md = MissionDef(
            raw={},
            base_dir=Path("."),
            mission_type="station_keeping",
            aircraft=params,
            cost=cp,
            weather_path=Path(weather_path),
            dem_path=Path(dem_path) if dem_path else None,
            start=parse_point(at_),
            initial_time=parse_time(depart),
            initial_soc=soc,
            sim=_sim_config(dt, vgnd_floor, max_climb_angle),
            duration_s=hours * 3600.0,
        )
        plan = loiter_plan_result(md, env)
        save_plan(output, plan, stride)
    except Exception as exc:
        _fail(ctx, exc)
        return
    click.echo(
        json.dumps(
            {
                "output": output,
                "cancelled": plan.cancelled,
                "min_soc": plan.min_soc,
                "total_cost": None if math.isinf(plan.total_cost) else plan.total_cost,
            },
            sort_keys=True,
        )
    )


@main.command("multigoal")
@click.option("--mission", "mission_path", required=True, type=click.Path(exists=True))
@click.option("--report", "report_flag", is_flag=True, help="print the solver report")
@click.option("--stride", default=1, show_default=True)
@click.option("-o", "--output", default=None, type=click.Path())
@click.pass_context
def multigoal_cmd(ctx, mission_path, report_flag, stride, output):
    """Multi-goal inspection mission from a mission definition file."""
    try:
        d = json.loads(Path(mission_path).read_text())
        md = parse_definition(d, base_dir=Path(mission_path).parent)
        plan, extra = run_mission(md, threads=ctx.obj["threads"])
        if output:
            doc = extra.to_json(stride) if extra is not None else plan.to_json(stride)
            Path(output).write_text(json.dumps(doc, sort_keys=True))
    except Exception as exc:
        _fail(ctx, exc)
        return
    out = {
        "cancelled": plan.cancelled,
        "duration_h": plan.duration_s / 3600.0,
        "distance_km": plan.distance_m / 1000.0,
        "min_soc": plan.min_soc,
    }
    if extra is not None:
        out["order"] = extra.order
        if report_flag:
            out["report"] = extra.report()
    click.echo(json.dumps(out, sort_keys=True))


@main.command("launch-window")
@click.option("--mission", "mission_path", required=True, type=click.Path(exists=True))
@click.option("--window", required=True, help="t0,t1 (unix or ISO, comma-separated)")
@click.option("--step", required=True, help="step seconds (e.g. 21600)")
@click.option("-o", "--output", default=None, type=click.Path())
@click.pass_context
def launch_window_cmd(ctx, mission_path, window, step, output):
    """Departure-time sweep for a mission definition."""
    try:
        d = json.loads(Path(mission_path).read_text())
        md = parse_definition(d, base_dir=Path(mission_path).parent)
        t0_s, t1_s = window.split(",")
        sweep = run_launch_window(
            md,
            (parse_time(t0_s), parse_time(t1_s)),
            float(step),
            threads=ctx.obj["threads"],
        )
        if output:
            Path(output).write_text(json.dumps(sweep, sort_keys=True))
    except Exception as exc:
        _fail(ctx, exc)
        return
    best = sweep["best_index"]
    click.echo(
        json.dumps(
            {
                "n": len(sweep["entries"]),
                "best_index": best,
                "best_t_depart": (
                    None if best is None else sweep["entries"][best]["t_depart"]
                ),
            },
            sort_keys=True,
        )
    )


@main.command("replan")
@click.option("--mission", "mission_path", required=True, type=click.Path(exists=True))
@click.option("--plan", "plan_path", required=True, type=click.Path(exists=True))
@click.option("--state", required=True, help="lat,lon,alt,time,soc")
@click.option("--weather", "weather_path", default=None, type=click.Path(exists=True))
@click.option("--stride", default=1, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path())
@click.pass_context
def replan_cmd(ctx, mission_path, plan_path, state, weather_path, stride, output):
    """Re-optimize the remaining route from a current aircraft state."""
    try:
        from .aircraft.simulate import AircraftState
        from .planner.p2p import replan as replan_fn
        from .service.store import _plan_from_doc

        d = json.loads(Path(mission_path).read_text())
        md = parse_definition(d, base_dir=Path(mission_path).parent)
        prev = _plan_from_doc(json.loads(Path(plan_path).read_text()))
        lat, lon, alt, t, soc = (float(v) for v in state.split(","))
        env = md.environment(weather_path)
        st = AircraftState(
            position=GeoPoint(lat, lon, alt),
            time=t,
            soc=soc,
            v_air=md.aircraft.v_air_opt,
        )
        plan = replan_fn(
            prev, st, env, md.aircraft, md.cost, dem=env.dem, config=md.sim,
            threads=ctx.obj["threads"],
        )
        save_plan(output, plan, stride)
    except Exception as exc:
        _fail(ctx, exc)
        return
    click.echo(
        json.dumps(
            {"output": output, "cancelled": plan.cancelled,
             "duration_h": plan.duration_s / 3600.0},
            sort_keys=True,
        )
    )


@main.command("export")
@click.option("--plan", "plan_path", required=True, type=click.Path(exists=True))
@click.option(
    "--format", "fmt", default="json", type=click.Choice(["json", "qgc_wpl"]),
    show_default=True,
)
@click.option("--decimate", default=1, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path())
@click.pass_context
def export_cmd(ctx, plan_path, fmt, decimate, output):
    """Export a stored plan's waypoints for upload."""
    try:
        from .service.store import _plan_from_doc

        plan = _plan_from_doc(json.loads(Path(plan_path).read_text()))
        if fmt == "qgc_wpl":
            Path(output).write_text(waypoints_wpl(plan, decimate))
        else:
            Path(output).write_text(
                json.dumps(waypoints_json(plan, decimate), sort_keys=True)
            )
    except Exception as exc:
        _fail(ctx, exc)
        return
    click.echo(f"wrote {output}")


# -- studies --------------------------------------------------------------------


@main.group()
def study():
    """Verification studies (heuristic quality, evaluation counts)."""


@study.command("heuristic")
@click.option("--trials", default=100, show_default=True)
@click.option("--aircraft", "aircraft_src", default="as3", show_default=True)
@click.option("--costs", "costs_src", default="arctic", show_default=True)
@click.option("--weather", "weather_path", required=True, type=click.Path(exists=True))
@click.option("--slices", default=6, show_default=True)
@click.option("--vertices", default=3, show_default=True)
@click.option("-o", "--output", default=None, type=click.Path(), help="CSV of q values")
@click.pass_context
def study_heuristic(
    ctx, trials, aircraft_src, costs_src, weather_path, slices, vertices, output
):
    """Heuristic quality q = h/true-cost over randomized point pairs."""
    try:
        params = load_aircraft(aircraft_src)
        cp = load_cost_params(costs_src)
        env = _load_env(weather_path, None)
        res = heuristic_quality_study(
            trials,
            ctx.obj["seed"],
            params,
            cp,
            env,
            edge_grid={"n_slices": slices, "n_vertices": vertices},
        )
        if output:
            with open(output, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["q"])
                for q in res["q"]:
                    w.writerow([q])
    except Exception as exc:
        _fail(ctx, exc)
        return
    click.echo(
        json.dumps(
            {"n": res["n"], "mean_q": res["mean"], "max_q": res["max"]},
            sort_keys=True,
        )
    )


@study.command("evals")
@click.option("--nodes", "n_nodes", default=6, show_default=True)
@click.option("--q", "qualities", default="0.1,0.7", show_default=True)
@click.option("--instances", default=10, show_default=True)
@click.option("-o", "--output", default=None, type=click.Path(), help="CSV table")
@click.pass_context
def study_evals(ctx, n_nodes, qualities, instances, output):
    """Edge-evaluation counts vs forced heuristic quality."""
    try:
        rows = []
        for q in (float(v) for v in qualities.split(",")):
            res = forced_quality_eval_counts(n_nodes, q, instances, ctx.obj["seed"])
            rows.append(res)
        if output:
            with open(output, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["n_nodes", "quality", "mean_evals", "n_naive"])
                for r in rows:
                    w.writerow([r["n_nodes"], r["quality"], r["mean"], r["n_naive"]])
    except Exception as exc:
        _fail(ctx, exc)
        return
    click.echo(
        json.dumps(
            [
                {"quality": r["quality"], "mean_evals": r["mean"], "n_naive": r["n_naive"]}
                for r in rows
            ],
            sort_keys=True,
        )
    )


# -- service ----------------------------------------------------------------------


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8469, show_default=True)
@click.option("--workers", default=2, show_default=True, help="planning job workers")
@click.pass_context
def serve_cmd(ctx, host, port, workers):
    """Run the mission HTTP service."""
    import uvicorn

    from .service import MissionStore, create_app

    app = create_app(MissionStore(ctx.obj["workdir"]), max_workers=workers)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
