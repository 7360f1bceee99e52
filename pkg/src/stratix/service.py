"""Session-oriented HTTP API sequencing the three workflow phases.

The service adds no computation: every served view is a viewmodels builder
output rendered with to_json_bytes, so responses are byte-identical to
composing the modules in-process. Sessions live in memory; per-session
locks serialize concurrent requests to one session while distinct sessions
proceed in parallel.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, UploadFile, File
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import cluster as _cluster
from . import svg as _svg
from .errors import (
    NotFoundError,
    ParseError,
    PhaseError,
    StratixError,
    ValidationError,
)
from .features import full_view, parse_feature_list, select_features
from .ingest import align_cohort, parse_clinical_table, parse_expression_matrix
from .integrate import (
    build_parallel_sets,
    compare_selections,
    cross_tab,
    make_selection,
)
from .pipeline import (
    ModalityParams,
    _parse_atom,
    cluster_modality,
    silhouette_csv,
)
from .survival import curves_to_csv
from .viewmodels import (
    graph_payload,
    heatmap_payload,
    parallel_sets_payload,
    silhouette_payload,
    survival_payload,
    to_json_bytes,
)

MODALITIES = ("a", "b")
VIEW_NAMES = ("heatmap_a", "heatmap_b", "silhouette_a", "silhouette_b",
              "graph_a", "graph_b", "parallel_sets")
EXPORT_VIEWS = VIEW_NAMES + ("survival",)

_STATUS = {
    "parse_error": 422,
    "validation_error": 422,
    "phase_violation": 409,
    "not_found": 404,
    "error": 400,
}


@dataclass
class _ModalityState:
    selection_report: object = None
    view: object = None
    partition: object = None
    silhouette: object = None
    layout: object = None
    graph: object = None


@dataclass
class _Session:
    session_id: str
    cohort: object
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)
    modality: dict = field(default_factory=lambda: {
        "a": _ModalityState(), "b": _ModalityState(),
    })
    table: object = None
    model: object = None
    selections: dict = field(default_factory=dict)  # name -> SelectionSpec
    survival: object = None  # (curves, result)

    @property
    def phase(self) -> str:
        if self.survival is not None:
            return "integrated"
        if all(self.modality[m].partition is not None for m in MODALITIES):
            return "clustered"
        if all(self.modality[m].view is not None for m in MODALITIES):
            return "features_set"
        return "ingested"

    def summary(self) -> dict:
        return {
            "samples": len(self.cohort.sample_ids),
            "features_a": self.cohort.matrix_a.n_features,
            "features_b": self.cohort.matrix_b.n_features,
            "dropped": {k: list(v) for k, v in self.cohort.dropped.items()},
        }


class _Store:
    def __init__(self):
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()

    def add(self, session: _Session) -> None:
        with self._lock:
            self._sessions[session.session_id] = session

    def get(self, session_id: str) -> _Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise NotFoundError(f"unknown session {session_id!r}")
        return session


def _check_modality(modality: str) -> None:
    if modality not in MODALITIES:
        raise NotFoundError(f"unknown modality {modality!r}; expected a or b")


def _invalidate_downstream(session: _Session, modality: str | None) -> None:
    """Clear everything derived from the given modality (or from either)."""
    if modality is not None:
        state = session.modality[modality]
        state.partition = None
        state.silhouette = None
        state.layout = None
        state.graph = None
    session.table = None
    session.model = None
    session.selections = {}
    session.survival = None


def _json_response(payload) -> Response:
    return Response(content=to_json_bytes(payload),
                    media_type="application/json")


def create_app() -> FastAPI:
    app = FastAPI(title="stratix", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = _Store()

    @app.exception_handler(StratixError)
    def _stratix_error(_request: Request, exc: StratixError):
        return JSONResponse(status_code=_STATUS.get(exc.code, 400),
                            content=exc.to_payload())

    @app.exception_handler(RequestValidationError)
    def _request_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "code": "validation_error",
                "message": "invalid request",
                "detail": exc.errors(),
            },
        )

    @app.post("/sessions")
    def create_session(matrix_a: UploadFile = File(...),
                       matrix_b: UploadFile = File(...),
                       clinical: UploadFile = File(...)):
        def read_text(upload: UploadFile, label: str) -> str:
            raw = upload.file.read()
            try:
                return raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ParseError(f"{label} is not valid UTF-8") from exc

        ma = parse_expression_matrix(read_text(matrix_a, "matrix_a"), "a")
        mb = parse_expression_matrix(read_text(matrix_b, "matrix_b"), "b")
        clin = parse_clinical_table(read_text(clinical, "clinical"))
        cohort = align_cohort(ma, mb, clin)
        session = _Session(session_id=uuid.uuid4().hex, cohort=cohort)
        store.add(session)
        return _json_response({
            "session_id": session.session_id,
            "revision": session.revision,
            "phase": session.phase,
            "summary": session.summary(),
        })

    @app.get("/sessions/{session_id}")
    def session_info(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return _json_response({
                "session_id": session.session_id,
                "revision": session.revision,
                "phase": session.phase,
                "summary": session.summary(),
                "selections": {
                    name: {"size": len(spec.resolved)}
                    for name, spec in sorted(session.selections.items())
                },
            })

    @app.get("/sessions/{session_id}/features/{modality}")
    def list_features(session_id: str, modality: str, offset: int = 0,
                      limit: int = 100):
        _check_modality(modality)
        session = store.get(session_id)
        if offset < 0 or limit < 1:
            raise ValidationError("offset must be >= 0 and limit >= 1")
        with session.lock:
            matrix = (session.cohort.matrix_a if modality == "a"
                      else session.cohort.matrix_b)
            ids = matrix.feature_ids[offset:offset + limit]
            return _json_response({
                "modality": modality,
                "total": matrix.n_features,
                "offset": offset,
                "limit": limit,
                "feature_ids": list(ids),
            })

    @app.post("/sessions/{session_id}/features/{modality}")
    def set_features(session_id: str, modality: str, body: dict):
        _check_modality(modality)
        session = store.get(session_id)
        raw = body.get("features")
        if raw is None:
            raise ValidationError('body must contain "features"')
        requested = parse_feature_list(raw) if isinstance(raw, str) else \
            [str(item) for item in raw]
        with session.lock:
            matrix = (session.cohort.matrix_a if modality == "a"
                      else session.cohort.matrix_b)
            selection, view = select_features(matrix, requested)
            state = session.modality[modality]
            state.selection_report = selection
            state.view = view
            _invalidate_downstream(session, modality)
            session.revision += 1
            return _json_response({
                "revision": session.revision,
                "phase": session.phase,
                "modality": modality,
                "matched": list(selection.matched),
                "unmatched": list(selection.unmatched),
            })

    @app.post("/sessions/{session_id}/cluster/{modality}")
    def run_clustering(session_id: str, modality: str, body: dict):
        _check_modality(modality)
        session = store.get(session_id)
        method = body.get("method")
        if method not in _cluster.METHODS:
            raise ValidationError(
                f"method must be one of {_cluster.METHODS}, got {method!r}"
            )
        if "seed" not in body:
            raise ValidationError("seed is required")
        k = body.get("k")
        if method in ("kmeans", "spectral"):
            if k is None:
                raise ValidationError(f"k is required for method {method}")
            k = int(k)
        params = ModalityParams(
            method=method,
            k=k,
            seed=int(body["seed"]),
            metric=str(body.get("metric", "euclidean")),
            threshold=float(body.get("threshold", 0.0)),
        )
        with session.lock:
            state = session.modality[modality]
            if state.view is None:
                raise PhaseError(
                    f"features for modality {modality} not set",
                    detail={"phase": session.phase},
                )
            partition, graph = cluster_modality(state.view, params)
            state.partition = partition
            state.graph = graph
            state.silhouette = (_cluster.silhouette(state.view, partition)
                                if partition.k >= 2 else None)
            state.layout = _cluster.heatmap_order(state.view, partition)
            _invalidate_downstream(session, None)
            other = "b" if modality == "a" else "a"
            if session.modality[other].partition is not None:
                pa = session.modality["a"].partition
                pb = session.modality["b"].partition
                session.table = cross_tab(pa, pb)
                session.model = build_parallel_sets(session.table)
            session.revision += 1
            report = state.silhouette
            return _json_response({
                "revision": session.revision,
                "phase": session.phase,
                "modality": modality,
                "method": method,
                "k": partition.k,
                "cluster_sizes": [int(c) for c in partition.cluster_sizes()],
                "wcss": partition.wcss,
                "silhouette_mean": None if report is None else float(report.mean),
            })

    def _view_payload(session: _Session, view: str) -> dict:
        if view == "parallel_sets":
            if session.model is None:
                raise PhaseError("not clustered: parallel sets needs both "
                                 "modalities clustered")
            return parallel_sets_payload(session.model)
        kind, _, modality = view.rpartition("_")
        _check_modality(modality)
        state = session.modality[modality]
        if state.partition is None:
            raise PhaseError(f"modality {modality} is not clustered")
        if kind == "heatmap":
            return heatmap_payload(state.view, state.partition, state.layout,
                                   modality)
        if kind == "silhouette":
            if state.silhouette is None:
                raise ValidationError(
                    "silhouette is undefined for a single cluster"
                )
            return silhouette_payload(state.silhouette, modality)
        if kind == "graph":
            return graph_payload(state.graph, state.partition, modality)
        raise NotFoundError(f"unknown view {view!r}")

    @app.get("/sessions/{session_id}/views/{view}")
    def get_view(session_id: str, view: str):
        if view not in VIEW_NAMES:
            raise NotFoundError(
                f"unknown view {view!r}; expected one of {list(VIEW_NAMES)}"
            )
        session = store.get(session_id)
        with session.lock:
            return _json_response(_view_payload(session, view))

    @app.post("/sessions/{session_id}/selections")
    def define_selection(session_id: str, body: dict):
        session = store.get(session_id)
        name = body.get("name")
        if not name or not isinstance(name, str):
            raise ValidationError("selection name must be a non-empty string")
        atoms_raw = body.get("atoms")
        if atoms_raw is None:
            raise ValidationError('body must contain "atoms"')
        with session.lock:
            if session.table is None:
                raise PhaseError("not clustered: selections need both "
                                 "modalities clustered")
            if not atoms_raw:
                session.selections.pop(name, None)
                session.survival = None
                session.revision += 1
                return _json_response({
                    "revision": session.revision,
                    "phase": session.phase,
                    "name": name,
                    "removed": True,
                })
            atoms = [_parse_atom(a) for a in atoms_raw]
            spec = make_selection(name, atoms, session.table)
            session.selections[name] = spec
            session.survival = None
            session.revision += 1
            return _json_response({
                "revision": session.revision,
                "phase": session.phase,
                "name": name,
                "size": len(spec.resolved),
            })

    @app.post("/sessions/{session_id}/survival")
    def run_survival(session_id: str, body: dict):
        session = store.get(session_id)
        names = body.get("selections")
        if not names or not isinstance(names, list):
            raise ValidationError('body must contain a non-empty "selections" list')
        with session.lock:
            if session.table is None:
                raise PhaseError("not clustered: survival comparison needs "
                                 "both modalities clustered")
            missing = [n for n in names if n not in session.selections]
            if missing:
                raise NotFoundError("unknown selection(s)",
                                    detail={"names": missing})
            specs = [session.selections[n] for n in names]
            curves, result = compare_selections(specs, session.table,
                                                session.cohort.clinical)
            session.survival = (curves, result)
            session.revision += 1
            payload = survival_payload(curves, result)
            payload["revision"] = session.revision
            payload["phase"] = session.phase
            return _json_response(payload)

    def _export_csv(session: _Session, view: str) -> str:
        if view == "survival":
            curves, _ = session.survival
            return curves_to_csv(curves)
        if view == "parallel_sets":
            model = session.model
            lines = ["cluster_a,cluster_b,size"]
            lines += [f"{a},{b},{s}" for a, b, s in model.ribbons]
            return "\n".join(lines) + "\n"
        kind, _, modality = view.rpartition("_")
        state = session.modality[modality]
        if kind == "silhouette":
            return silhouette_csv(state.silhouette)
        if kind == "graph":
            lines = ["source,target,weight"]
            lines += [
                f"{state.graph.sample_ids[i]},{state.graph.sample_ids[j]},{w!r}"
                for i, j, w in state.graph.edges
            ]
            return "\n".join(lines) + "\n"
        # heatmap: the ordered matrix
        payload = heatmap_payload(state.view, state.partition, state.layout,
                                  modality)
        lines = ["feature_id," + ",".join(payload["sample_order"])]
        for fid, row in zip(payload["feature_ids"], payload["values"]):
            lines.append(fid + "," + ",".join(repr(v) for v in row))
        return "\n".join(lines) + "\n"

    def _export_svg(session: _Session, view: str) -> str:
        if view == "survival":
            curves, result = session.survival
            return _svg.survival_svg(survival_payload(curves, result))
        payload = _view_payload(session, view)
        if view == "parallel_sets":
            return _svg.parallel_sets_svg(payload)
        if view.startswith("heatmap"):
            return _svg.heatmap_svg(payload)
        if view.startswith("silhouette"):
            return _svg.silhouette_svg(payload)
        return _svg.graph_svg(payload)

    @app.get("/sessions/{session_id}/export/{view}")
    def export_view(session_id: str, view: str, format: str = "svg_data"):
        if view not in EXPORT_VIEWS:
            raise NotFoundError(
                f"unknown view {view!r}; expected one of {list(EXPORT_VIEWS)}"
            )
        if format not in ("svg_data", "csv"):
            raise ValidationError(
                f"format must be svg_data or csv, got {format!r}"
            )
        session = store.get(session_id)
        with session.lock:
            if view == "survival" and session.survival is None:
                raise PhaseError("no survival comparison has been run")
            if view != "survival":
                _view_payload(session, view)  # phase checks
            if view.startswith("silhouette"):
                state = session.modality[view.rpartition("_")[2]]
                if state.silhouette is None:
                    raise ValidationError(
                        "silhouette is undefined for a single cluster"
                    )
            if format == "csv":
                return Response(content=_export_csv(session, view),
                                media_type="text/csv; charset=utf-8")
            return Response(content=_export_svg(session, view),
                            media_type="image/svg+xml")

    return app


app = create_app()
