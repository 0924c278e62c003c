"""Local HTTP API over the ride store.

JSON bodies, UTF-8, full float precision (display rounding is the
client's job). GETs are read-only and cache-consistent: /rides carries an
ETag derived from the store manifest, so an unchanged store always yields
the same ETag and body. Non-finite diagnostic values serialize as the
strings "inf"/"-inf"; absent values are null. Schemas and one golden
example per endpoint live in docs/api.md.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import AppConfig
from .errors import (
    DriveFitError,
    DuplicateRideId,
    RideNotFound,
    StorageFailure,
    TripLogError,
    UnknownMetric,
)
from .pipeline import ingest_csv
from .store import RideStore
from .summary import published_metric_names

MAX_SERIES_POINTS = 2000


def _json(payload, status_code: int = 200, headers: dict | None = None) -> Response:
    # stdlib dumps keeps full float precision (repr round-trip).
    return Response(
        content=json.dumps(payload, ensure_ascii=False, allow_nan=False),
        status_code=status_code,
        media_type="application/json",
        headers=headers,
    )


def create_app(config: AppConfig = AppConfig()) -> FastAPI:
    app = FastAPI(title="drivefit", version="0.1.0", docs_url=None, redoc_url=None)
    store = RideStore(config.store)
    app.state.store = store
    app.state.config = config

    @app.exception_handler(DriveFitError)
    async def _drivefit_error(request: Request, exc: DriveFitError):
        if isinstance(exc, RideNotFound):
            status = 404
        elif isinstance(exc, DuplicateRideId):
            status = 409
        elif isinstance(exc, (TripLogError, UnknownMetric)):
            status = 400
        elif isinstance(exc, StorageFailure):
            status = 500
        else:
            status = 400
        payload = {"error": type(exc).__name__, "detail": str(exc)}
        if isinstance(exc, UnknownMetric):
            payload["valid_metrics"] = exc.valid
        return JSONResponse(payload, status_code=status)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/rides")
    def list_rides(request: Request):
        etag = f'"{store.manifest_etag()}"'
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304, headers={"ETag": etag})
        headers_payload = [
            {
                "ride_id": s.ride_id,
                "started_at": s.started_at,
                "duration_s": s.duration_s,
                "distance_km": s.distance_km,
                "acc_on_percent": s.acc_on_percent,
                "safety_index_all": s.safety_index.all,
                "fuel_index_all": s.fuel_index.all,
                "fuel_efficiency_kmpl_all": s.fuel_efficiency_kmpl.all,
                "comfort_index_all": s.comfort_index.all,
            }
            for s in store.list_rides_by_time()
        ]
        return _json(headers_payload, headers={"ETag": etag})

    @app.get("/rides/{ride_id}")
    def ride_detail(ride_id: str):
        summary = store.load_ride(ride_id)
        diagnostics = store.load_diagnostics(ride_id)
        payload = {"summary": summary.to_json_dict(), "diagnostics": None}
        if diagnostics is not None:
            payload["diagnostics"] = diagnostics.downsample(MAX_SERIES_POINTS).to_json_dict()
            payload["diagnostics_stride"] = diagnostics.stride(MAX_SERIES_POINTS)
            payload["diagnostics_total_samples"] = len(diagnostics)
        return _json(payload)

    @app.get("/rides/{ride_id}/comparison")
    def ride_comparison(ride_id: str, window: int = Query(default=None, ge=1)):
        report = store.comparison_report(
            ride_id,
            window if window is not None else config.window,
            window_includes_recent=config.window_includes_recent,
        )
        return _json(report.to_json_dict())

    @app.get("/trends")
    def trends(metric: str):
        series = store.trend_series(metric)
        return _json(series.to_json_dict())

    @app.post("/ingest")
    async def ingest(request: Request, ride_id: str, skip_bad_rows: bool = False):
        body = await request.body()
        if request.headers.get("content-type", "").startswith("multipart/"):
            form = await request.form()
            upload = form.get("file")
            if upload is None:
                return JSONResponse(
                    {"error": "SchemaMismatch", "detail": "multipart body needs a 'file' field"},
                    status_code=400,
                )
            body = await upload.read()
        result = ingest_csv(body, ride_id, store, config, skip_bad_rows=skip_bad_rows)
        return _json(result.summary.to_json_dict())

    @app.get("/metrics/names")
    def metric_names():
        return {"metrics": published_metric_names()}

    static_dir = config.static_dir
    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def run(config: AppConfig = AppConfig()) -> None:
    """Blocking uvicorn server, used by the CLI ``serve`` subcommand."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="info")
