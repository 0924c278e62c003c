"""Per-ride summary records and their JSON form.

The JSON field names below are a wire contract shared by the store files,
the HTTP API and the CLI ``--json`` output; do not rename them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone

SCHEMA_VERSION = 1

TRIPLE_FIELDS = ("safety_index", "fuel_index", "fuel_efficiency_kmpl", "comfort_index")
SCALAR_FIELDS = ("acc_on_percent", "distance_km", "duration_s", "mean_speed_kph")


@dataclass(frozen=True)
class MetricTriple:
    """A metric evaluated over cruise-ON samples, cruise-OFF samples and all.

    A slot is ``None`` (absent) when its cruise state covers no samples or
    the metric is undefined there — never coerced to 0.
    """

    on: float | None
    off: float | None
    all: float | None

    def slot(self, name: str) -> float | None:
        return getattr(self, name)

    def to_json_dict(self) -> dict:
        return {"on": self.on, "off": self.off, "all": self.all}

    @classmethod
    def from_json_dict(cls, d: dict) -> "MetricTriple":
        return cls(on=d.get("on"), off=d.get("off"), all=d.get("all"))


@dataclass(frozen=True)
class RideSummary:
    """The persisted per-ride aggregate of indices and basic statistics."""

    ride_id: str
    started_at: str | None  # ISO-8601 UTC; None only for synthetic aggregates
    duration_s: float
    distance_km: float
    mean_speed_kph: float
    acc_on_percent: float
    safety_index: MetricTriple
    fuel_index: MetricTriple
    fuel_efficiency_kmpl: MetricTriple
    comfort_index: MetricTriple
    schema_version: int = SCHEMA_VERSION

    def validate(self) -> None:
        if self.duration_s <= 0:
            raise ValueError(f"duration_s must be > 0, got {self.duration_s}")
        if self.distance_km < 0:
            raise ValueError(f"distance_km must be >= 0, got {self.distance_km}")
        if not 0.0 <= self.acc_on_percent <= 100.0:
            raise ValueError(f"acc_on_percent must be in [0, 100], got {self.acc_on_percent}")
        for name in TRIPLE_FIELDS:
            triple = getattr(self, name)
            for slot in ("on", "off", "all"):
                v = triple.slot(slot)
                if v is None:
                    continue
                if not math.isfinite(v):
                    raise ValueError(f"{name}.{slot} is not finite: {v}")
                if name != "fuel_efficiency_kmpl" and not 0.0 <= v <= 100.0:
                    raise ValueError(f"{name}.{slot} must be in [0, 100], got {v}")

    def metric_value(self, metric: str) -> float | None:
        """Value of a published metric slot, e.g. ``safety_index.on``."""
        if metric in SCALAR_FIELDS:
            return getattr(self, metric)
        base, _, slot = metric.partition(".")
        if base in TRIPLE_FIELDS and slot in ("on", "off", "all"):
            return getattr(self, base).slot(slot)
        raise KeyError(metric)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "ride_id": self.ride_id,
            "started_at": self.started_at,
            "duration_s": self.duration_s,
            "distance_km": self.distance_km,
            "mean_speed_kph": self.mean_speed_kph,
            "acc_on_percent": self.acc_on_percent,
            "safety_index": self.safety_index.to_json_dict(),
            "fuel_index": self.fuel_index.to_json_dict(),
            "fuel_efficiency_kmpl": self.fuel_efficiency_kmpl.to_json_dict(),
            "comfort_index": self.comfort_index.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "RideSummary":
        return cls(
            ride_id=d["ride_id"],
            started_at=d.get("started_at"),
            duration_s=d["duration_s"],
            distance_km=d["distance_km"],
            mean_speed_kph=d["mean_speed_kph"],
            acc_on_percent=d["acc_on_percent"],
            safety_index=MetricTriple.from_json_dict(d["safety_index"]),
            fuel_index=MetricTriple.from_json_dict(d["fuel_index"]),
            fuel_efficiency_kmpl=MetricTriple.from_json_dict(d["fuel_efficiency_kmpl"]),
            comfort_index=MetricTriple.from_json_dict(d["comfort_index"]),
            schema_version=d.get("schema_version", SCHEMA_VERSION),
        )


def published_metric_names() -> list[str]:
    """Every metric slot a trend series can be requested for."""
    names = [f"{base}.{slot}" for base in TRIPLE_FIELDS for slot in ("on", "off", "all")]
    names.extend(SCALAR_FIELDS)
    return names


def canonical_json(obj) -> str:
    """Key-sorted, whitespace-free JSON; the byte-for-byte comparison form."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def epoch_to_iso(epoch_s: float) -> str:
    """Epoch seconds to ISO-8601 UTC, e.g. 1716000000.0 -> 2024-05-18T02:40:00+00:00."""
    return datetime.fromtimestamp(epoch_s, tz=timezone.utc).isoformat()


def iso_to_epoch(iso: str) -> float:
    return datetime.fromisoformat(iso).timestamp()
