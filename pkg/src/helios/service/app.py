"""HTTP API over the mission store.

Short operations are synchronous; planning endpoints accept background=true
to run as jobs polled via /jobs/{id}.  All payloads are JSON.
"""
from __future__ import annotations

import json
import threading
import traceback
import uuid
from concurrent.futures import ThreadPoolExecutor

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse, PlainTextResponse

from ..environment.errors import DomainError
from ..mission import MissionValidationError
from ..multigoal import MissionInfeasibleError
from .store import MissionStore, StateReport


class JobRunner:
    def __init__(self, max_workers: int = 2):
        self._pool = ThreadPoolExecutor(max_workers=max_workers)
        self._jobs: dict[str, dict] = {}
        self._guard = threading.Lock()

    def submit(self, fn, *args, **kwargs) -> str:
        job_id = uuid.uuid4().hex[:12]
        with self._guard:
            self._jobs[job_id] = {"status": "queued", "result": None, "error": None}

        def run():
            with self._guard:
                self._jobs[job_id]["status"] = "running"
            try:
                result = fn(*args, **kwargs)
                with self._guard:
                    self._jobs[job_id].update(status="done", result=result)
            except Exception as exc:  # surfaced via the job document
                with self._guard:
                    self._jobs[job_id].update(
                        status="error",
                        error=f"{type(exc).__name__}: {exc}",
                        trace=traceback.format_exc(),
                    )

        self._pool.submit(run)
        return job_id

    def get(self, job_id: str) -> dict:
        with self._guard:
            if job_id not in self._jobs:
                raise KeyError(job_id)
            return dict(self._jobs[job_id])


def create_app(store: MissionStore, max_workers: int = 2) -> FastAPI:
    app = FastAPI(title="helios mission service")
    jobs = JobRunner(max_workers=max_workers)
    app.state.store = store
    app.state.jobs = jobs

    def _http_error(exc: Exception) -> HTTPException:
        if isinstance(exc, (MissionValidationError, DomainError, ValueError)):
            return HTTPException(status_code=422, detail=str(exc))
        if isinstance(exc, KeyError):
            return HTTPException(status_code=404, detail=str(exc))
        if isinstance(exc, MissionInfeasibleError):
            return HTTPException(
                status_code=409,
                detail={"message": str(exc), "reasons": exc.reasons},
            )
        return HTTPException(status_code=500, detail=str(exc))

    @app.post("/missions", status_code=201)
    def post_mission(body: dict):
        try:
            rec = store.create_mission(
                body.get("definition", body), body.get("retrieved_at")
            )
        except Exception as exc:
            raise _http_error(exc) from exc
        return rec.to_json()

    @app.get("/missions")
    def get_missions():
        return store.list_missions()

    @app.get("/missions/{mission_id}")
    def get_mission(mission_id: str):
        try:
            return store.load_record(mission_id).to_json()
        except Exception as exc:
            raise _http_error(exc) from exc

    @app.post("/missions/{mission_id}/plan")
    def post_plan(mission_id: str, body: dict | None = None):
        body = body or {}
        kind = body.get("kind")
        t_depart = body.get("t_depart")
        threads = int(body.get("threads", 1))
        stride = int(body.get("stride", 1))

        def work():
            rec, idx, plan = store.run_plan(
                mission_id,
                kind=kind,
                t_depart=t_depart,
                threads=threads,
                stride=stride,
            )
            return {"mission": rec.to_json(), "plan_index": idx}

        if body.get("background"):
            return {"job": jobs.submit(work)}
        try:
            return work()
        except Exception as exc:
            raise _http_error(exc) from exc

    @app.post("/missions/{mission_id}/launch-window")
    def post_launch_window(mission_id: str, body: dict):
        try:
            window = (float(body["t0"]), float(body["t1"]))
            step = float(body["step_s"])
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"bad window: {exc}") from exc

        def work():
            return store.run_launch_window(
                mission_id, window, step, threads=int(body.get("threads", 1))
            )

        if body.get("background"):
            return {"job": jobs.submit(work)}
        try:
            return work()
        except Exception as exc:
            raise _http_error(exc) from exc

    @app.post("/missions/{mission_id}/state")
    def post_state(mission_id: str, body: dict):
        try:
            report = StateReport.from_json(body["state"])
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"bad state: {exc}") from exc

        def work():
            rec, idx, plan = store.submit_state_and_replan(
                mission_id,
                report,
                weather_ref=body.get("weather_ref"),
                retrieved_at=body.get("retrieved_at"),
                threads=int(body.get("threads", 1)),
                stride=int(body.get("stride", 1)),
            )
            return {"mission": rec.to_json(), "plan_index": idx}

        if body.get("background"):
            return {"job": jobs.submit(work)}
        try:
            return work()
        except Exception as exc:
            raise _http_error(exc) from exc

    @app.get("/missions/{mission_id}/plans/{index}")
    def get_plan(mission_id: str, index: int):
        try:
            return store.get_plan_doc(mission_id, index)
        except Exception as exc:
            raise _http_error(exc) from exc

    @app.get("/missions/{mission_id}/plans/{index}/waypoints")
    def get_waypoints(mission_id: str, index: int, format: str = Query("json")):
        try:
            text = store.export_waypoints(mission_id, index, format)
        except Exception as exc:
            raise _http_error(exc) from exc
        if format == "qgc_wpl":
            return PlainTextResponse(text)
        return JSONResponse(content=json.loads(text))

    @app.get("/weather/{ref:path}/slice")
    def get_weather_slice(
        ref: str,
        field: str = Query(...),
        time: float = Query(...),
        alt: float | None = Query(None),
        stride: int = Query(1),
    ):
        try:
            return store.weather_slice(ref, field, time, alt, stride)
        except Exception as exc:
            raise _http_error(exc) from exc

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        try:
            doc = jobs.get(job_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail="no such job") from exc
        body = {"status": doc["status"]}
        if doc["status"] == "done":
            body["result"] = doc["result"]
        elif doc["status"] == "error":
            body["error"] = doc["error"]
        return body

    return app
