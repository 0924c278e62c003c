"""Append-only ride store plus trend and comparison reports.

Directory layout (the default):

    <root>/manifest.json          ordered ride_id + started_at index
    <root>/rides/<id>.json        one RideSummary document per ride
    <root>/rides/<id>.diag.npz    cached diagnostic series (optional)

Summaries are human-inspectable JSON with full float precision. Opening a
path that ends in ``.json`` instead selects single-file mode: the whole
store (diagnostics included) lives in that one document, which suits the
service when a directory is unwanted.

Writes are serialized in-process and each file lands via atomic replace,
so concurrent readers see either the pre- or post-append state, never a
torn record.
"""

from __future__ import annotations

import hashlib
import json
import threading
import urllib.parse
from dataclasses import dataclass
from pathlib import Path

from .diagnostics import Diagnostics
from .errors import DuplicateRideId, RideNotFound, StorageFailure, UnknownMetric, ZeroBaseline
from .summary import (
    SCALAR_FIELDS,
    SCHEMA_VERSION,
    TRIPLE_FIELDS,
    MetricTriple,
    RideSummary,
    canonical_json,
    iso_to_epoch,
    published_metric_names,
)

COMPARISON_METRICS = [
    f"{base}.{slot}" for base in TRIPLE_FIELDS for slot in ("on", "off", "all")
] + ["acc_on_percent"]

DEFAULT_WINDOW = 5


@dataclass
class TrendPoint:
    ordinal: int
    started_at: str
    value: float | None


@dataclass
class TrendSeries:
    metric: str
    points: list[TrendPoint]

    def to_json_dict(self) -> dict:
        return {
            "metric": self.metric,
            "points": [
                {"ordinal": p.ordinal, "started_at": p.started_at, "value": p.value}
                for p in self.points
            ],
        }


@dataclass
class ComparisonReport:
    recent: RideSummary
    previous: RideSummary | None
    rolling_avg: RideSummary | None
    window: int
    change_to_avg: dict
    change_to_prev: dict

    def to_json_dict(self) -> dict:
        return {
            "recent": self.recent.to_json_dict(),
            "previous": self.previous.to_json_dict() if self.previous else None,
            "rolling_avg": self.rolling_avg.to_json_dict() if self.rolling_avg else None,
            "window": self.window,
            "change_to_avg": self.change_to_avg,
            "change_to_prev": self.change_to_prev,
        }


# --- pure report builders ---------------------------------------------------

def change_rate(recent: float, baseline: float) -> float:
    """Percent change of ``recent`` against ``baseline`` (full precision)."""
    if baseline == 0:
        raise ZeroBaseline(f"change rate against baseline 0 is undefined (recent={recent})")
    return 100.0 * (recent - baseline) / baseline


def _safe_change(recent: float | None, baseline: float | None) -> float | None:
    if recent is None or baseline is None or baseline == 0:
        return None
    return change_rate(recent, baseline)


def rolling_average(rides: list[RideSummary], ride_id: str = "rolling-average") -> RideSummary:
    """Presence-aware slot-wise mean of ride summaries.

    A triple slot absent in every ride stays absent; otherwise it is the
    mean over the rides where it is present (an all-OFF drive has no ON
    metrics, not zero-valued ones).
    """
    if not rides:
        raise ValueError("rolling_average needs at least one ride")

    def mean_of(values):
        present = [v for v in values if v is not None]
        return sum(present) / len(present) if present else None

    triples = {
        name: MetricTriple(
            **{
                slot: mean_of([getattr(r, name).slot(slot) for r in rides])
                for slot in ("on", "off", "all")
            }
        )
        for name in TRIPLE_FIELDS
    }
    return RideSummary(
        ride_id=ride_id,
        started_at=None,
        duration_s=mean_of([r.duration_s for r in rides]),
        distance_km=mean_of([r.distance_km for r in rides]),
        mean_speed_kph=mean_of([r.mean_speed_kph for r in rides]),
        acc_on_percent=mean_of([r.acc_on_percent for r in rides]),
        **triples,
    )


def _time_ordered(summaries: list[RideSummary]) -> list[RideSummary]:
    return sorted(
        enumerate(summaries),
        key=lambda pair: (iso_to_epoch(pair[1].started_at), pair[0]),
    )


def build_comparison_report(
    summaries: list[RideSummary],
    ride_id: str,
    window: int = DEFAULT_WINDOW,
    *,
    window_includes_recent: bool = False,
) -> ComparisonReport:
    """Recent vs previous vs rolling-average comparison over in-memory rides.

    ``summaries`` is insertion-ordered; chronology (started_at, stable by
    insertion) decides "previous" and the rolling window. The window holds
    the rides immediately preceding the recent one and excludes the recent
    ride itself unless ``window_includes_recent`` — averaging a ride into
    its own baseline would bias every change rate toward zero.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    ordered = [s for _, s in _time_ordered(summaries)]
    ids = [s.ride_id for s in ordered]
    if ride_id not in ids:
        raise RideNotFound(f"ride {ride_id!r} is not stored")
    pos = ids.index(ride_id)
    recent = ordered[pos]
    previous = ordered[pos - 1] if pos > 0 else None

    if window_includes_recent:
        window_rides = ordered[max(0, pos + 1 - window): pos + 1]
    else:
        window_rides = ordered[max(0, pos - window): pos]
    avg = rolling_average(window_rides) if window_rides else None

    def changes(baseline: RideSummary | None) -> dict:
        out = {}
        for metric in COMPARISON_METRICS:
            if baseline is None:
                out[metric] = None
            else:
                out[metric] = _safe_change(recent.metric_value(metric), baseline.metric_value(metric))
        return out

    return ComparisonReport(
        recent=recent,
        previous=previous,
        rolling_avg=avg,
        window=window,
        change_to_avg=changes(avg),
        change_to_prev=changes(previous),
    )


def build_trend_series(summaries: list[RideSummary], metric: str) -> TrendSeries:
    """One point per ride in started_at order; absent values stay gaps."""
    if metric not in published_metric_names():
        raise UnknownMetric(metric, published_metric_names())
    points = [
        TrendPoint(ordinal=ordinal, started_at=s.started_at, value=s.metric_value(metric))
        for ordinal, s in _time_ordered(summaries)
    ]
    return TrendSeries(metric=metric, points=points)


# --- the store -----------------------------------------------------------------

class RideStore:
    """Append-only persistence for ride summaries and their diagnostics."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.single_file = self.path.suffix == ".json"
        self._lock = threading.Lock()
        if not self.single_file:
            try:
                (self.path / "rides").mkdir(parents=True, exist_ok=True)
            except OSError as e:
                raise StorageFailure(f"cannot create store at {self.path}: {e}") from None

    # -- write --

    def store_ride(self, summary: RideSummary, diagnostics: Diagnostics | None = None) -> int:
        """Durably append one ride; returns its insertion ordinal."""
        summary.validate()
        if summary.started_at is None:
            raise ValueError("stored rides need a started_at timestamp")
        with self._lock:
            if self.single_file:
                return self._store_single(summary, diagnostics)
            return self._store_directory(summary, diagnostics)

    def _store_directory(self, summary: RideSummary, diagnostics: Diagnostics | None) -> int:
        manifest = self._read_manifest()
        if any(e["ride_id"] == summary.ride_id for e in manifest["rides"]):
            raise DuplicateRideId(f"ride {summary.ride_id!r} already stored")
        ordinal = len(manifest["rides"])
        try:
            self._write_json(self._ride_path(summary.ride_id), summary.to_json_dict())
            if diagnostics is not None:
                diagnostics.save_npz(self._diag_path(summary.ride_id))
            manifest["rides"].append(
                {"ride_id": summary.ride_id, "started_at": summary.started_at}
            )
            self._write_json(self.path / "manifest.json", manifest)
        except OSError as e:
            raise StorageFailure(f"write failed for ride {summary.ride_id!r}: {e}") from None
        return ordinal

    def _store_single(self, summary: RideSummary, diagnostics: Diagnostics | None) -> int:
        doc = self._read_single()
        if any(e["ride_id"] == summary.ride_id for e in doc["rides"]):
            raise DuplicateRideId(f"ride {summary.ride_id!r} already stored")
        ordinal = len(doc["rides"])
        doc["rides"].append({"ride_id": summary.ride_id, "started_at": summary.started_at})
        doc["summaries"][summary.ride_id] = summary.to_json_dict()
        if diagnostics is not None:
            doc["diagnostics"][summary.ride_id] = diagnostics.to_json_dict()
        try:
            self._write_json(self.path, doc)
        except OSError as e:
            raise StorageFailure(f"write failed for ride {summary.ride_id!r}: {e}") from None
        return ordinal

    # -- read --

    def ride_ids(self) -> list[str]:
        return [e["ride_id"] for e in self._index()["rides"]]

    def __contains__(self, ride_id: str) -> bool:
        return ride_id in self.ride_ids()

    def __len__(self) -> int:
        return len(self._index()["rides"])

    def load_ride(self, ride_id: str) -> RideSummary:
        if self.single_file:
            doc = self._read_single()
            if ride_id not in doc["summaries"]:
                raise RideNotFound(f"ride {ride_id!r} is not stored")
            return RideSummary.from_json_dict(doc["summaries"][ride_id])
        path = self._ride_path(ride_id)
        if not path.exists():
            raise RideNotFound(f"ride {ride_id!r} is not stored")
        return RideSummary.from_json_dict(self._read_json(path))

    def load_diagnostics(self, ride_id: str) -> Diagnostics | None:
        if ride_id not in self:
            raise RideNotFound(f"ride {ride_id!r} is not stored")
        if self.single_file:
            doc = self._read_single()
            raw = doc["diagnostics"].get(ride_id)
            return Diagnostics.from_json_dict(raw) if raw else None
        path = self._diag_path(ride_id)
        if not path.exists():
            return None
        try:
            return Diagnostics.load_npz(path)
        except (OSError, ValueError, KeyError) as e:
            raise StorageFailure(f"corrupt diagnostics for {ride_id!r}: {e}") from None

    def list_rides(self) -> list[RideSummary]:
        """All summaries in insertion order."""
        return [self.load_ride(ride_id) for ride_id in self.ride_ids()]

    def list_rides_by_time(self) -> list[RideSummary]:
        return [s for _, s in _time_ordered(self.list_rides())]

    def manifest_etag(self) -> str:
        payload = canonical_json(self._index()).encode()
        return hashlib.sha256(payload).hexdigest()[:32]

    def fe_population(self) -> list[float]:
        """Every stored per-state fuel-efficiency value, insertion order."""
        values = []
        for summary in self.list_rides():
            for slot in ("on", "off", "all"):
                v = summary.fuel_efficiency_kmpl.slot(slot)
                if v is not None:
                    values.append(v)
        return values

    # -- reports --

    def comparison_report(
        self,
        ride_id: str,
        window: int = DEFAULT_WINDOW,
        *,
        window_includes_recent: bool = False,
    ) -> ComparisonReport:
        return build_comparison_report(
            self.list_rides(),
            ride_id,
            window,
            window_includes_recent=window_includes_recent,
        )

    def trend_series(self, metric: str) -> TrendSeries:
        return build_trend_series(self.list_rides(), metric)

    # -- plumbing --

    def _ride_path(self, ride_id: str) -> Path:
        return self.path / "rides" / f"{_fs_name(ride_id)}.json"

    def _diag_path(self, ride_id: str) -> Path:
        return self.path / "rides" / f"{_fs_name(ride_id)}.diag.npz"

    def _index(self) -> dict:
        return self._read_single() if self.single_file else self._read_manifest()

    def _read_manifest(self) -> dict:
        path = self.path / "manifest.json"
        if not path.exists():
            return {"schema_version": SCHEMA_VERSION, "rides": []}
        return self._read_json(path)

    def _read_single(self) -> dict:
        if not self.path.exists():
            return {
                "schema_version": SCHEMA_VERSION,
                "rides": [],
                "summaries": {},
                "diagnostics": {},
            }
        return self._read_json(self.path)

    def _read_json(self, path: Path) -> dict:
        try:
            with open(path, encoding="utf-8") as f:
                return json.load(f)
        except OSError as e:
            raise StorageFailure(f"cannot read {path}: {e}") from None
        except json.JSONDecodeError as e:
            raise StorageFailure(f"corrupt store file {path}: {e}") from None

    def _write_json(self, path: Path, obj) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "w", encoding="utf-8") as f:
            json.dump(obj, f, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False)
            f.write("\n")
        tmp.replace(path)


def _fs_name(ride_id: str) -> str:
    """Filesystem-safe, reversible encoding of an opaque ride id."""
    return urllib.parse.quote(ride_id, safe="")
