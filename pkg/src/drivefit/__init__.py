"""drivefit: per-ride sustainability analytics for decoded CAN-bus trip logs.

Turn a canonical trip CSV into safety / fuel-efficiency / comfort indices
split by cruise-control state, persist the summaries append-only, and
serve trend and comparison reports over HTTP or the CLI.
"""

from .config import AppConfig, load_config
from .diagnostics import Diagnostics
from .errors import (
    ConfigError,
    DriveFitError,
    DuplicateRideId,
    DurationTooShort,
    EmptyLog,
    EmptyPopulation,
    InvalidRows,
    NonMonotonicTime,
    RideNotFound,
    SchemaMismatch,
    StorageFailure,
    UnknownMetric,
    ZeroBaseline,
)
from .ingest import (
    SignalSample,
    TripLog,
    UniformTrace,
    compute_jerk,
    derive_acceleration,
    parse_trip_log,
    resample,
)
from .metrics import (
    ComfortResult,
    CruiseSegments,
    FuelParams,
    FuelResult,
    SafetyZoning,
    Thresholds,
    classify_zones,
    comfort_result,
    fcr,
    fuel_index,
    fuel_result,
    headway_series,
    lead_speed_series,
    segment_by_cruise,
    summarize_trip,
    ttc_series,
)
from .pipeline import IngestResult, build_diagnostics, ingest_csv, prepare_trace, summarize_csv
from .store import (
    ComparisonReport,
    RideStore,
    TrendSeries,
    build_comparison_report,
    build_trend_series,
    change_rate,
    rolling_average,
)
from .summary import MetricTriple, RideSummary, canonical_json, published_metric_names

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "ComfortResult",
    "ComparisonReport",
    "ConfigError",
    "CruiseSegments",
    "Diagnostics",
    "DriveFitError",
    "DuplicateRideId",
    "DurationTooShort",
    "EmptyLog",
    "EmptyPopulation",
    "FuelParams",
    "FuelResult",
    "IngestResult",
    "InvalidRows",
    "MetricTriple",
    "NonMonotonicTime",
    "RideNotFound",
    "RideStore",
    "RideSummary",
    "SafetyZoning",
    "SchemaMismatch",
    "SignalSample",
    "StorageFailure",
    "Thresholds",
    "TrendSeries",
    "TripLog",
    "UniformTrace",
    "UnknownMetric",
    "ZeroBaseline",
    "build_comparison_report",
    "build_diagnostics",
    "build_trend_series",
    "canonical_json",
    "change_rate",
    "classify_zones",
    "comfort_result",
    "compute_jerk",
    "derive_acceleration",
    "fcr",
    "fuel_index",
    "fuel_result",
    "headway_series",
    "ingest_csv",
    "lead_speed_series",
    "load_config",
    "parse_trip_log",
    "prepare_trace",
    "published_metric_names",
    "resample",
    "rolling_average",
    "segment_by_cruise",
    "summarize_csv",
    "summarize_trip",
    "ttc_series",
]
