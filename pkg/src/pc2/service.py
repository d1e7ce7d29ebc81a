"""HTTP/JSON game service: sessions of placed points and async solve jobs.

The browser UI talks only to this API.  Solve jobs run on a bounded worker
pool and publish immutable results; polling clients see queued -> running
-> done/cancelled.  Sessions are in-memory only and expire after a day of
inactivity.
"""

from __future__ import annotations

import math
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, field_validator

from . import config_builder, jsonio
from .cover import SolveBudget, cover_from_translate, solve_cover
from .geometry import Point2, lattice_distances, nearest_lattice_point
from .interstitium import handicap_oracle

SESSION_TTL = 24 * 3600.0
JOB_QUEUE_CAPACITY = 32


class PointIn(BaseModel):
    x: float
    y: float

    @field_validator("x", "y")
    @classmethod
    def finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("coordinates must be finite")
        return v


class SolveIn(BaseModel):
    mode: Literal["free", "handicap"] = "free"
    budget: int = 1000
    seed: int = 0


@dataclass
class Session:
    id: str
    points: list[Point2] = field(default_factory=list)
    history: list[dict] = field(default_factory=list)
    mode: str = "free"
    last_access: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def view(self) -> dict:
        return {
            "id": self.id,
            "mode": self.mode,
            "points": jsonio.point_list(self.points),
            "history": self.history[-100:],
        }


@dataclass
class Job:
    id: str
    session_id: str
    mode: str
    status: str = "queued"  # queued | running | done | cancelled
    result: dict | None = None
    cancel: threading.Event = field(default_factory=threading.Event)

    def view(self) -> dict:
        out = {
            "id": self.id,
            "session_id": self.session_id,
            "mode": self.mode,
            "status": self.status,
        }
        if self.result is not None:
            out["result"] = self.result
        return out


def _free_solve(points: list[Point2], budget: int, seed: int, cancel) -> dict:
    sol = solve_cover(
        points,
        budget=SolveBudget(partitions=budget),
        rng_seed=seed,
        should_stop=cancel.is_set,
    )
    payload = jsonio.solution_to_dict(sol)
    covered_flags = [
        any(c.dist(p) <= 1.0 + 1e-9 for c in sol.centers) for p in points
    ]
    payload["covered_flags"] = covered_flags if sol.centers else [False] * len(points)
    payload["disks"] = jsonio.point_list(sol.centers)
    return payload


def _best_effort_translate(points: list[Point2], grid: int = 128) -> Point2:
    """Translate covering the most points, from a coarse scan (display aid
    when no translate covers everything)."""
    from .geometry import SQRT3

    arr = np.array([[p.x, p.y] for p in points])
    us = (np.arange(grid) + 0.5) / grid
    uu, vv = np.meshgrid(us, us, indexing="ij")
    txy = np.stack([2 * uu.ravel() + vv.ravel(), SQRT3 * vv.ravel()], axis=1)
    counts = np.zeros(len(txy), dtype=np.int32)
    for p in arr:
        counts += lattice_distances(txy - p) <= 1.0
    best = int(np.argmax(counts))
    return Point2(txy[best, 0], txy[best, 1])


def _handicap_solve(points: list[Point2], cancel) -> dict:
    res = handicap_oracle(points)
    payload = jsonio.handicap_to_dict(res)
    if res.coverable:
        t = res.translate
        payload["covered_flags"] = [True] * len(points)
    else:
        # No translate covers everything; show the best one found by a
        # coarse scan so the UI can highlight the stubborn points.
        t = _best_effort_translate(points)
        payload["best_effort_translate"] = [t.x, t.y]
        payload["covered_flags"] = [
            nearest_lattice_point(p - t)[1] <= 1.0 for p in points
        ]
    payload["disks"] = jsonio.point_list(cover_from_translate(points, t))
    return payload


class AppState:
    def __init__(self, workers: int | None = None):
        self.sessions: dict[str, Session] = {}
        self.jobs: dict[str, Job] = {}
        self.lock = threading.Lock()
        self.pool = ThreadPoolExecutor(max_workers=workers or 4)

    def prune(self) -> None:
        now = time.time()
        with self.lock:
            stale = [k for k, s in self.sessions.items() if now - s.last_access > SESSION_TTL]
            for k in stale:
                del self.sessions[k]

    def get_session(self, sid: str) -> Session:
        self.prune()
        with self.lock:
            sess = self.sessions.get(sid)
        if sess is None:
            raise HTTPException(status_code=404, detail="unknown session")
        sess.last_access = time.time()
        return sess

    def queued_count(self) -> int:
        with self.lock:
            return sum(1 for j in self.jobs.values() if j.status == "queued")


def create_app(workers: int | None = None) -> FastAPI:
    app = FastAPI(title="pc2 game service")
    state = AppState(workers=workers)
    app.state.pc2 = state

    @app.exception_handler(RequestValidationError)
    def validation_handler(_request, exc):
        # Stringify: offending inputs may be NaN/inf, which strict JSON
        # responses cannot carry.
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.post("/sessions", status_code=201)
    def create_session():
        sid = uuid.uuid4().hex[:12]
        with state.lock:
            state.sessions[sid] = Session(id=sid)
        return state.sessions[sid].view()

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return state.get_session(sid).view()

    @app.post("/sessions/{sid}/points")
    def add_point(sid: str, body: PointIn):
        sess = state.get_session(sid)
        with sess.lock:
            sess.points.append(Point2(body.x, body.y))
            sess.history.append({"op": "add", "point": [body.x, body.y]})
            return sess.view()

    @app.delete("/sessions/{sid}/points/{idx}")
    def remove_point(sid: str, idx: int):
        sess = state.get_session(sid)
        with sess.lock:
            if not 0 <= idx < len(sess.points):
                raise HTTPException(status_code=404, detail="no such point")
            p = sess.points.pop(idx)
            sess.history.append({"op": "remove", "index": idx, "point": [p.x, p.y]})
            return sess.view()

    @app.post("/sessions/{sid}/solve", status_code=202)
    def submit_solve(sid: str, body: SolveIn):
        sess = state.get_session(sid)
        with sess.lock:
            if not sess.points:
                raise HTTPException(status_code=409, detail="no points to cover")
            points = list(sess.points)
            sess.mode = body.mode
        if state.queued_count() >= JOB_QUEUE_CAPACITY:
            raise HTTPException(status_code=429, detail="job queue full")
        job = Job(id=uuid.uuid4().hex[:12], session_id=sid, mode=body.mode)
        with state.lock:
            state.jobs[job.id] = job

        def run():
            if job.cancel.is_set():
                job.status = "cancelled"
                return
            job.status = "running"
            try:
                if body.mode == "free":
                    result = _free_solve(points, body.budget, body.seed, job.cancel)
                else:
                    result = _handicap_solve(points, job.cancel)
            except Exception as exc:  # surfaced to the client, not swallowed
                job.result = {"error": str(exc)}
                job.status = "done"
                return
            if job.cancel.is_set():
                job.status = "cancelled"
                return
            job.result = result
            job.status = "done"

        state.pool.submit(run)
        return {"job_id": job.id}

    @app.get("/jobs/{jid}")
    def poll_job(jid: str):
        job = state.jobs.get(jid)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return job.view()

    @app.post("/jobs/{jid}/cancel")
    def cancel_job(jid: str):
        job = state.jobs.get(jid)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        if job.status in ("queued", "running"):
            job.cancel.set()
            if job.status == "queued":
                job.status = "cancelled"
        return {"id": job.id, "status": job.status}

    @app.get("/presets/fig1-55")
    def preset_55():
        import json as _json

        cfg = config_builder.hard_55_configuration()
        return _json.loads(config_builder.configuration_to_json(cfg))

    @app.get("/sessions/{sid}/overlay")
    def overlay(
        sid: str,
        mode: str = "handicap",
        t: str = "0,0",
        bbox: str = "-3,-2,3,2",
        res: int = 128,
    ):
        state.get_session(sid)
        if mode != "handicap":
            raise HTTPException(status_code=400, detail="unknown overlay mode")
        try:
            tx, ty = (float(v) for v in t.split(","))
            x0, y0, x1, y1 = (float(v) for v in bbox.split(","))
        except ValueError:
            raise HTTPException(status_code=400, detail="bad overlay parameters")
        res = max(8, min(int(res), 512))
        xs = np.linspace(x0, x1, res)
        ys = np.linspace(y1, y0, res)  # row 0 is the top of the box
        xx, yy = np.meshgrid(xs, ys)
        pts = np.stack([xx.ravel() - tx, yy.ravel() - ty], axis=1)
        mask = (lattice_distances(pts) > 1.0).reshape(res, res)
        return {
            "mode": mode,
            "t": [tx, ty],
            "bbox": [x0, y0, x1, y1],
            "res": res,
            "mask": mask.astype(int).tolist(),
        }

    return app


app = create_app()
