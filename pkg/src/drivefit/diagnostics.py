"""Per-sample diagnostic series cached at ingest time.

These back the ride-detail API endpoint and the CSV exports without ever
re-running the kernels: headway with zone labels, the modeled consumption
rate, and the comfort violation mask, aligned on the trace grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

ARRAY_FIELDS = (
    "t",            # seconds since trace start
    "speed",        # m/s
    "accel",        # m/s^2
    "jerk",         # m/s^3
    "cruise_on",    # bool
    "lead_distance",  # m, NaN = no lead
    "headway",      # s, NaN = no lead, inf = stationary ego
    "ttc",          # s, NaN = not estimable, inf = not closing
    "zone_code",    # int8, see metrics.ZONE_*
    "fcr",          # L/100km
    "violation",    # bool
    "distance_km",  # cumulative km
)

_ZONE_JSON = {-1: None, 0: "alert", 1: "attention", 2: "safe"}


@dataclass
class Diagnostics:
    t: np.ndarray
    speed: np.ndarray
    accel: np.ndarray
    jerk: np.ndarray
    cruise_on: np.ndarray
    lead_distance: np.ndarray
    headway: np.ndarray
    ttc: np.ndarray
    zone_code: np.ndarray
    fcr: np.ndarray
    violation: np.ndarray
    distance_km: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def downsample(self, max_points: int) -> "Diagnostics":
        """Deterministic stride-based thinning to at most ``max_points``."""
        n = len(self)
        if n <= max_points:
            return self
        stride = math.ceil(n / max_points)
        return Diagnostics(**{f.name: getattr(self, f.name)[::stride] for f in fields(self)})

    def stride(self, max_points: int) -> int:
        return 1 if len(self) <= max_points else math.ceil(len(self) / max_points)

    def to_json_dict(self) -> dict:
        """JSON-safe form: NaN -> null, infinities -> "inf"/"-inf" strings."""
        out = {}
        for name in ARRAY_FIELDS:
            arr = getattr(self, name)
            if name == "zone_code":
                out["zone"] = [_ZONE_JSON[int(v)] for v in arr]
            elif arr.dtype == bool:
                out[name] = [bool(v) for v in arr]
            else:
                out[name] = [_json_float(float(v)) for v in arr]
        return out

    @classmethod
    def from_json_dict(cls, d: dict) -> "Diagnostics":
        zone_back = {None: -1, "alert": 0, "attention": 1, "safe": 2}
        kwargs = {}
        for name in ARRAY_FIELDS:
            if name == "zone_code":
                kwargs[name] = np.array([zone_back[v] for v in d["zone"]], dtype=np.int8)
            elif name in ("cruise_on", "violation"):
                kwargs[name] = np.array(d[name], dtype=bool)
            else:
                kwargs[name] = np.array([_parse_float(v) for v in d[name]], dtype=float)
        return cls(**kwargs)

    def save_npz(self, path) -> None:
        np.savez(path, **{f.name: getattr(self, f.name) for f in fields(self)})

    @classmethod
    def load_npz(cls, path) -> "Diagnostics":
        with np.load(path) as data:
            return cls(**{name: data[name] for name in ARRAY_FIELDS})


def _json_float(v: float):
    if math.isnan(v):
        return None
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _parse_float(v) -> float:
    if v is None:
        return math.nan
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    return float(v)
