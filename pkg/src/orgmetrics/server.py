"""HTTP API exposing datasets, contexts, and every view model.

One session is one analyst steering one evaluation: mutations (weights,
inclusion flags, context) are serialized per session and bump a monotonic
version; every view endpoint recomputes from the current (context, profile)
pair through a per-version cache, so reads after a mutation always reflect
it.  Clients may pass their last seen `version` as a query parameter to any
view endpoint and get a 409 naming the current version when stale.
"""

import threading
import uuid
from dataclasses import dataclass, field, replace
from datetime import timedelta
from typing import Optional

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import analysis, groups, ingest, matrix as matrix_mod, metrics
from .errors import (
    InvalidKError,
    InvalidParamsError,
    OrgMetricsError,
    RangeError,
    UnknownCategoryError,
    UnknownEmployeeError,
    UnknownKeyError,
)
from .ingest import Behavior, EvaluationContext, RecordType


@dataclass
class Dataset:
    dataset_id: str
    records: list
    employees: list
    profile: metrics.WeightProfile


@dataclass
class Session:
    session_id: str
    dataset: Dataset
    profile: metrics.WeightProfile
    context: EvaluationContext
    seed: int
    version: int = 1
    lock: threading.Lock = field(default_factory=threading.Lock)
    cache: dict = field(default_factory=dict)

    def snapshot(self):
        with self.lock:
            return self.profile, self.context, self.version

    def mutate(self, profile=None, context=None) -> int:
        with self.lock:
            if profile is not None:
                self.profile = profile
            if context is not None:
                self.context = context
            self.version += 1
            self.cache.clear()
            return self.version

    def edit_profile(self, fn):
        """Apply a profile edit atomically; returns (new profile, new version)."""
        with self.lock:
            self.profile = fn(self.profile)
            self.version += 1
            self.cache.clear()
            return self.profile, self.version

    def cached(self, key, compute):
        with self.lock:
            if key in self.cache:
                return self.cache[key]
        value = compute()
        with self.lock:
            self.cache.setdefault(key, value)
            return self.cache[key]


def default_context(records) -> EvaluationContext:
    """Full span of the dataset, all behaviors and record types."""
    if records:
        start = min(r.timestamp for r in records)
        end = max(r.timestamp for r in records) + timedelta(seconds=1)
    else:
        start = ingest.parse_timestamp("1970-01-01T00:00:00Z")
        end = ingest.parse_timestamp("2100-01-01T00:00:00Z")
    return EvaluationContext(start=start, end=end)


class WeightBody(BaseModel):
    weight: float


class IncludedBody(BaseModel):
    included: bool


class ContextBody(BaseModel):
    time_range: Optional[list] = None  # [start_iso, end_iso]
    behaviors: Optional[list] = None
    record_types: Optional[list] = None


class SessionBody(BaseModel):
    dataset_id: Optional[str] = None


def _context_view(ctx: EvaluationContext) -> dict:
    return {
        "time_range": [ingest.format_timestamp(ctx.start), ingest.format_timestamp(ctx.end)],
        "behaviors": sorted(b.value for b in ctx.behaviors),
        "record_types": sorted(t.value for t in ctx.record_types),
    }


def _weights_view(profile: metrics.WeightProfile) -> dict:
    entries = {}
    for cid in profile.categories():
        e = profile.entries[cid]
        entries[cid] = {
            "weight": e.weight,
            "included": e.included,
            "rating_count": len(e.ratings),
            "rating_mean": (sum(e.ratings) / len(e.ratings)) if e.ratings else None,
        }
    return {"source": profile.source.value, "profile_version": profile.version, "entries": entries}


def create_app(datasets, seed: int = 0, ui_dir=None) -> FastAPI:
    """Build the API around preloaded datasets (dataset_id -> Dataset)."""
    app = FastAPI(title="orgmetrics", version="0.1.0")
    sessions = {}
    default_id = next(iter(datasets)) if datasets else None

    @app.exception_handler(OrgMetricsError)
    def _domain_error(request, exc):
        if isinstance(exc, (UnknownCategoryError, UnknownEmployeeError, UnknownKeyError)):
            return JSONResponse(status_code=404, content={"detail": str(exc)})
        if isinstance(exc, (RangeError, InvalidKError, InvalidParamsError)):
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def _session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    def _check_version(session_version: int, supplied: Optional[int]):
        if supplied is not None and supplied != session_version:
            raise HTTPException(
                status_code=409,
                detail={
                    "message": "stale version",
                    "supplied_version": supplied,
                    "current_version": session_version,
                },
            )

    def _filtered(session: Session, profile, ctx):
        key = ("records", ctx)
        return session.cached(
            key, lambda: ingest.filter_records(session.dataset.records, ctx)
        )

    def _matrix(session: Session, snapshot):
        profile, ctx, version = snapshot
        stamped = replace(ctx, weight_profile_version=profile.version)

        def compute():
            records = _filtered(session, profile, ctx)
            return matrix_mod.build_matrix(records, session.dataset.employees, profile, stamped)

        return session.cached(("matrix", version), compute)

    def _clusters(session: Session, snapshot, k: int, cluster_seed: int):
        def compute():
            features = analysis.build_features(_matrix(session, snapshot))
            return analysis.kmeans(features, k=k, seed=cluster_seed)

        return session.cached(("clusters", snapshot[2], k, cluster_seed), compute)

    def _groups(session: Session, snapshot, by: str, k: int, cluster_seed: int):
        def compute():
            profile, ctx, _version = snapshot
            records = _filtered(session, profile, ctx)
            if by in ("shift", "district"):
                return groups.group_by_assignment(records, session.dataset.employees, by)
            if by == "cluster":
                result = _clusters(session, snapshot, k, cluster_seed)
                return groups.group_by_clusters(result, records, session.dataset.employees)
            raise HTTPException(status_code=422, detail=f"unknown grouping {by!r}")

        return session.cached(("groups", snapshot[2], by, k, cluster_seed), compute)

    @app.post("/sessions")
    def create_session(body: Optional[SessionBody] = None):
        dataset_id = (body.dataset_id if body else None) or default_id
        dataset = datasets.get(dataset_id)
        if dataset is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset_id!r}")
        session = Session(
            session_id=uuid.uuid4().hex,
            dataset=dataset,
            profile=dataset.profile,
            context=default_context(dataset.records),
            seed=seed,
        )
        sessions[session.session_id] = session
        return {
            "session_id": session.session_id,
            "dataset_id": dataset.dataset_id,
            "version": session.version,
            "profile_version": session.profile.version,
            "context": _context_view(session.context),
            "employees": len(dataset.employees),
            "records": len(dataset.records),
        }

    @app.get("/sessions/{session_id}")
    def session_info(session_id: str):
        session = _session(session_id)
        profile, ctx, version = session.snapshot()
        return {
            "session_id": session.session_id,
            "dataset_id": session.dataset.dataset_id,
            "version": version,
            "profile_version": profile.version,
            "context": _context_view(ctx),
        }

    @app.get("/sessions/{session_id}/matrix")
    def get_matrix(
        session_id: str,
        sort_axis: Optional[str] = Query(None, pattern="^(employees|categories)$"),
        sort_key: Optional[str] = None,
        direction: str = Query("descending", pattern="^(ascending|descending)$"),
        pins: Optional[str] = None,
        version: Optional[int] = None,
    ):
        session = _session(session_id)
        snapshot = session.snapshot()
        _check_version(snapshot[2], version)
        m = _matrix(session, snapshot)

        # default presentation: both axes by total, descending
        ordering = matrix_mod.sort_by_total(m, "employees")
        ordering = matrix_mod.sort_by_total(m, "categories", base=ordering)
        if sort_axis:
            if sort_key:
                ordering = matrix_mod.sort_by_key(m, sort_axis, sort_key, direction, base=ordering)
            else:
                ordering = matrix_mod.sort_by_total(m, sort_axis, direction, base=ordering)
        if pins:
            ordering = matrix_mod.pin_selection(ordering, [p for p in pins.split(",") if p])

        payload = matrix_mod.to_view_model(m, ordering)
        payload["version"] = snapshot[2]
        return payload

    @app.get("/sessions/{session_id}/matrix/cell")
    def get_cell(session_id: str, category_id: str, employee_id: str,
                 version: Optional[int] = None):
        session = _session(session_id)
        snapshot = session.snapshot()
        _check_version(snapshot[2], version)
        detail = matrix_mod.cell_detail(_matrix(session, snapshot), category_id, employee_id)
        detail["version"] = snapshot[2]
        return detail

    @app.get("/sessions/{session_id}/groups")
    def get_groups(
        session_id: str,
        by: str = Query("shift", pattern="^(shift|district|cluster)$"),
        k: int = Query(analysis.DEFAULT_K, ge=1),
        seed: Optional[int] = None,
        version: Optional[int] = None,
    ):
        session = _session(session_id)
        snapshot = session.snapshot()
        _check_version(snapshot[2], version)
        cluster_seed = session.seed if seed is None else seed
        summaries = _groups(session, snapshot, by, k, cluster_seed)
        return {"by": by, "version": snapshot[2], "groups": groups.group_view_model(summaries)}

    @app.get("/sessions/{session_id}/dandelion")
    def get_dandelion(
        session_id: str,
        by: str = Query("shift", pattern="^(shift|district|cluster)$"),
        k_top: int = Query(groups.DEFAULT_TOP_K, ge=1),
        transform: str = Query("log", pattern="^(log|linear)$"),
        k: int = Query(analysis.DEFAULT_K, ge=1),
        seed: Optional[int] = None,
        version: Optional[int] = None,
    ):
        session = _session(session_id)
        snapshot = session.snapshot()
        _check_version(snapshot[2], version)
        cluster_seed = session.seed if seed is None else seed
        summaries = _groups(session, snapshot, by, k, cluster_seed)
        spec = groups.build_dandelion(summaries, k=k_top, transform=transform)
        payload = groups.dandelion_view_model(spec)
        payload.update({"by": by, "version": snapshot[2]})
        return payload

    @app.get("/sessions/{session_id}/radar/{group_id}")
    def get_radar(
        session_id: str,
        group_id: str,
        by: str = Query("shift", pattern="^(shift|district|cluster)$"),
        k_top: int = Query(groups.DEFAULT_TOP_K, ge=1),
        k: int = Query(analysis.DEFAULT_K, ge=1),
        seed: Optional[int] = None,
        version: Optional[int] = None,
    ):
        session = _session(session_id)
        snapshot = session.snapshot()
        _check_version(snapshot[2], version)
        cluster_seed = session.seed if seed is None else seed
        summaries = _groups(session, snapshot, by, k, cluster_seed)
        target = next((g for g in summaries if g.group_id == group_id), None)
        if target is None:
            raise HTTPException(status_code=404, detail=f"unknown group {group_id!r}")
        spec = groups.build_dandelion(summaries, k=k_top)
        records = _filtered(session, snapshot[0], snapshot[1])
        counts = groups.per_member_counts(records, target.member_ids)
        radar = groups.build_stacked_radar(target, counts, spec.axes)
        payload = groups.radar_view_model(radar)
        payload.update({"by": by, "version": snapshot[2]})
        return payload

    @app.get("/sessions/{session_id}/clusters")
    def get_clusters(
        session_id: str,
        k: int = Query(analysis.DEFAULT_K, ge=1),
        seed: Optional[int] = None,
        version: Optional[int] = None,
    ):
        session = _session(session_id)
        snapshot = session.snapshot()
        _check_version(snapshot[2], version)
        cluster_seed = session.seed if seed is None else seed
        result = _clusters(session, snapshot, k, cluster_seed)
        payload = result.to_view_model()
        payload["version"] = snapshot[2]
        return payload

    @app.get("/sessions/{session_id}/projection")
    def get_projection(
        session_id: str,
        perplexity: float = Query(10.0, gt=0),
        iterations: int = Query(1000, ge=1),
        learning_rate: float = Query(100.0, gt=0),
        seed: Optional[int] = None,
        version: Optional[int] = None,
    ):
        session = _session(session_id)
        snapshot = session.snapshot()
        _check_version(snapshot[2], version)
        proj_seed = session.seed if seed is None else seed
        params = analysis.ProjectionParams(
            perplexity=perplexity, iterations=iterations, learning_rate=learning_rate
        )

        def compute():
            features = analysis.build_features(_matrix(session, snapshot))
            return analysis.project(features, params, seed=proj_seed)

        result = session.cached(
            ("projection", snapshot[2], perplexity, iterations, learning_rate, proj_seed),
            compute,
        )
        payload = result.to_view_model()
        payload["version"] = snapshot[2]
        return payload

    @app.get("/sessions/{session_id}/weights")
    def get_weights(session_id: str, version: Optional[int] = None):
        session = _session(session_id)
        profile, _ctx, current = session.snapshot()
        _check_version(current, version)
        payload = _weights_view(profile)
        payload["version"] = current
        return payload

    @app.get("/sessions/{session_id}/weights/export")
    def export_weights(session_id: str):
        session = _session(session_id)
        profile, _ctx, _version = session.snapshot()
        return Response(
            content=metrics.dump_weight_profile(profile), media_type="application/json"
        )

    @app.get("/sessions/{session_id}/weights/{category_id}/histogram")
    def get_histogram(session_id: str, category_id: str, version: Optional[int] = None):
        session = _session(session_id)
        profile, _ctx, current = session.snapshot()
        _check_version(current, version)
        hist = metrics.rating_histogram(profile, category_id)
        return {
            "category_id": hist.category_id,
            "counts": list(hist.counts),
            "mean": hist.mean,
            "version": current,
        }

    @app.put("/sessions/{session_id}/weights/{category_id}")
    def put_weight(session_id: str, category_id: str, body: WeightBody):
        session = _session(session_id)
        profile, version = session.edit_profile(
            lambda p: metrics.set_weight(p, category_id, body.weight)
        )
        return {
            "category_id": category_id,
            "weight": profile.entries[category_id].weight,
            "version": version,
            "profile_version": profile.version,
        }

    @app.put("/sessions/{session_id}/weights/{category_id}/included")
    def put_included(session_id: str, category_id: str, body: IncludedBody):
        session = _session(session_id)
        profile, version = session.edit_profile(
            lambda p: metrics.set_included(p, category_id, body.included)
        )
        return {
            "category_id": category_id,
            "included": profile.entries[category_id].included,
            "version": version,
            "profile_version": profile.version,
        }

    @app.put("/sessions/{session_id}/context")
    def put_context(session_id: str, body: ContextBody):
        session = _session(session_id)
        _profile, current, _version = session.snapshot()
        try:
            start, end = current.start, current.end
            if body.time_range is not None:
                if len(body.time_range) != 2:
                    raise ValueError("time_range must be [start, end]")
                start = ingest.parse_timestamp(body.time_range[0])
                end = ingest.parse_timestamp(body.time_range[1])
            behaviors = (
                frozenset(Behavior(b) for b in body.behaviors)
                if body.behaviors is not None
                else current.behaviors
            )
            record_types = (
                frozenset(RecordType(t) for t in body.record_types)
                if body.record_types is not None
                else current.record_types
            )
            ctx = EvaluationContext(
                start=start, end=end, behaviors=behaviors, record_types=record_types
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        version = session.mutate(context=ctx)
        return {"context": _context_view(ctx), "version": version}

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
