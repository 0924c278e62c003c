"""The one ingest path shared by the library API, the CLI and the service.

parse -> resample -> derive accel/jerk -> summarize (-> store). Keeping a
single composition here is what guarantees that all three layers produce
identical numbers for identical input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import AppConfig
from .diagnostics import Diagnostics
from .ingest import UniformTrace, compute_jerk, derive_acceleration, parse_trip_log, resample
from .metrics import (
    MPS_TO_KPH,
    comfort_violations,
    fcr,
    headway_series,
    ttc_series,
    zone_codes,
    summarize_trip,
)
from .store import RideStore
from .summary import RideSummary


@dataclass
class IngestResult:
    summary: RideSummary
    trace: UniformTrace
    diagnostics: Diagnostics
    skipped_rows: int


def prepare_trace(
    data: bytes | str,
    ride_id: str,
    config: AppConfig = AppConfig(),
    *,
    skip_bad_rows: bool = False,
) -> tuple[UniformTrace, int]:
    """Parse canonical CSV into a fully derived trace; also reports skipped rows."""
    log = parse_trip_log(data, ride_id, skip_bad_rows=skip_bad_rows)
    trace = resample(log, config.rate_hz)
    trace = derive_acceleration(trace, smooth=config.smooth_accel, smooth_window=config.smooth_window)
    trace = compute_jerk(trace)
    return trace, log.skipped_rows


def summarize_csv(
    data: bytes | str,
    ride_id: str,
    config: AppConfig = AppConfig(),
    *,
    fe_population=(),
    skip_bad_rows: bool = False,
) -> IngestResult:
    """Full scoring of one canonical CSV; does not touch any store."""
    trace, skipped = prepare_trace(data, ride_id, config, skip_bad_rows=skip_bad_rows)
    summary = summarize_trip(
        trace,
        config.fuel,
        config.thresholds,
        fe_population=fe_population,
    )
    return IngestResult(
        summary=summary,
        trace=trace,
        diagnostics=build_diagnostics(trace, config),
        skipped_rows=skipped,
    )


def ingest_csv(
    data: bytes | str,
    ride_id: str,
    store: RideStore,
    config: AppConfig = AppConfig(),
    *,
    skip_bad_rows: bool = False,
) -> IngestResult:
    """Score one CSV against the store's history and append the result.

    The fuel index is scaled against every stored per-state efficiency
    value plus the new ride's own, so the summary returned here is exactly
    the one persisted.
    """
    result = summarize_csv(
        data,
        ride_id,
        config,
        fe_population=store.fe_population(),
        skip_bad_rows=skip_bad_rows,
    )
    store.store_ride(result.summary, result.diagnostics)
    return result


def build_diagnostics(trace: UniformTrace, config: AppConfig = AppConfig()) -> Diagnostics:
    """Per-sample series cached beside the summary for detail views/exports."""
    headway = headway_series(trace, config.thresholds.v_eps)
    return Diagnostics(
        t=trace.t_rel,
        speed=trace.speed,
        accel=trace.accel,
        jerk=trace.jerk,
        cruise_on=trace.cruise_on,
        lead_distance=trace.lead_distance,
        headway=headway,
        ttc=ttc_series(trace),
        zone_code=zone_codes(headway, config.thresholds),
        fcr=fcr(trace.speed * MPS_TO_KPH, trace.accel, config.fuel),
        violation=comfort_violations(trace.accel, trace.jerk, config.thresholds),
        distance_km=trace.distance_km,
    )
