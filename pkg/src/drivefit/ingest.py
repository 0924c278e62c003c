"""Trip-log ingestion: canonical CSV parsing and uniform resampling.

Canonical trip CSV (UTF-8, LF or CRLF, ``.`` decimal separator), header:

    timestamp,speed,lead_distance,accel,cruise_on,odometer

====================  =====================================================
timestamp             seconds, epoch-relative float, unique per row
speed                 m/s, >= 0
lead_distance         meters, > 0; empty cell = no lead vehicle detected
accel                 m/s^2; empty cell = not logged (derived from speed)
cruise_on             0 or 1
odometer              km, non-decreasing; empty cell = not logged
                      (distance is then integrated from speed)
====================  =====================================================

``timestamp``, ``speed`` and ``cruise_on`` are required columns; the other
three may be missing entirely (treated as never logged). Unknown extra
columns are ignored, so per-vehicle adapters only need to rewrite their
decoded CAN export into this schema — everything downstream is
vehicle-agnostic.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .errors import (
    ConfigError,
    DurationTooShort,
    EmptyLog,
    InvalidRows,
    NonMonotonicTime,
    SchemaMismatch,
)

REQUIRED_COLUMNS = ("timestamp", "speed", "cruise_on")
OPTIONAL_COLUMNS = ("lead_distance", "accel", "odometer")
CANONICAL_HEADER = "timestamp,speed,lead_distance,accel,cruise_on,odometer"

DEFAULT_RATE_HZ = 10.0


@dataclass(frozen=True)
class SignalSample:
    """One decoded CAN sample; ``None`` marks an absent optional signal."""

    timestamp: float
    speed: float
    cruise_on: bool
    lead_distance: float | None = None
    accel: float | None = None
    odometer: float | None = None


@dataclass
class TripLog:
    """Validated, time-sorted signals for one drive.

    Stored columnar (one array per signal) so million-row logs stay cheap;
    absent optional values are NaN. ``sample(i)``/``samples`` give the
    row-wise view.
    """

    ride_id: str
    timestamp: np.ndarray
    speed: np.ndarray
    lead_distance: np.ndarray
    accel: np.ndarray
    cruise_on: np.ndarray
    odometer: np.ndarray
    source_meta: dict = field(default_factory=dict)
    skipped_rows: int = 0

    def __len__(self) -> int:
        return len(self.timestamp)

    @property
    def duration_s(self) -> float:
        return float(self.timestamp[-1] - self.timestamp[0])

    def sample(self, i: int) -> SignalSample:
        def opt(arr):
            v = float(arr[i])
            return None if np.isnan(v) else v

        return SignalSample(
            timestamp=float(self.timestamp[i]),
            speed=float(self.speed[i]),
            cruise_on=bool(self.cruise_on[i]),
            lead_distance=opt(self.lead_distance),
            accel=opt(self.accel),
            odometer=opt(self.odometer),
        )

    @property
    def samples(self) -> list[SignalSample]:
        return [self.sample(i) for i in range(len(self))]

    @classmethod
    def from_samples(cls, ride_id: str, samples: list[SignalSample], source_meta: dict | None = None) -> "TripLog":
        def col(name):
            return np.array(
                [np.nan if getattr(s, name) is None else getattr(s, name) for s in samples],
                dtype=float,
            )

        log = cls(
            ride_id=ride_id,
            timestamp=np.array([s.timestamp for s in samples], dtype=float),
            speed=np.array([s.speed for s in samples], dtype=float),
            lead_distance=col("lead_distance"),
            accel=col("accel"),
            cruise_on=np.array([s.cruise_on for s in samples], dtype=bool),
            odometer=col("odometer"),
            source_meta=source_meta or {},
        )
        _validate_log(log)
        return log


@dataclass
class UniformTrace:
    """Fixed-rate kinematic trace with derived acceleration and jerk.

    All arrays share one length; ``lead_distance`` is NaN where no lead
    was detected. ``accel``/``jerk`` are ``None`` until
    :func:`derive_acceleration` / :func:`compute_jerk` fill them.
    """

    ride_id: str
    rate_hz: float
    t0: float
    speed: np.ndarray
    lead_distance: np.ndarray
    cruise_on: np.ndarray
    distance_km: np.ndarray
    accel: np.ndarray | None = None
    jerk: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.speed)

    @property
    def dt(self) -> float:
        return 1.0 / self.rate_hz

    @property
    def duration_s(self) -> float:
        return (len(self) - 1) * self.dt

    @property
    def t_rel(self) -> np.ndarray:
        """Seconds since trace start, one value per sample."""
        return np.arange(len(self)) / self.rate_hz


# --- CSV parsing ----------------------------------------------------------

_NUMERIC_DTYPES = {
    "timestamp": float,
    "speed": float,
    "lead_distance": float,
    "accel": float,
    "cruise_on": float,
    "odometer": float,
}


def parse_trip_log(
    data: bytes | str,
    ride_id: str,
    *,
    skip_bad_rows: bool = False,
    source_meta: dict | None = None,
) -> TripLog:
    """Parse canonical CSV content into a validated, time-sorted TripLog.

    Bad rows (unparsable numerics, empty required cells, negative speed,
    non-positive lead distance, odometer going backwards) abort the parse
    with :class:`InvalidRows` unless ``skip_bad_rows`` is set, in which
    case they are dropped and counted in ``TripLog.skipped_rows``.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SchemaMismatch(f"trip log is not valid UTF-8: {e}") from None
    else:
        text = data

    frame, bad_cells = _read_frame(text)

    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
    if missing:
        raise SchemaMismatch(
            f"missing required column(s) {', '.join(missing)}; "
            f"expected header {CANONICAL_HEADER!r}"
        )

    n = len(frame)
    cols = {}
    for name in _NUMERIC_DTYPES:
        if name in frame.columns:
            cols[name] = frame[name].to_numpy(dtype=float, copy=True)
        else:
            cols[name] = np.full(n, np.nan)

    # Row-validity mask. Empty optional cells are ABSENT, not errors.
    bad = bad_cells.copy() if bad_cells is not None else np.zeros(n, dtype=bool)
    bad |= np.isnan(cols["timestamp"])
    bad |= np.isnan(cols["speed"]) | (cols["speed"] < 0)
    bad |= np.isnan(cols["cruise_on"])
    with np.errstate(invalid="ignore"):
        bad |= np.isfinite(cols["lead_distance"]) & (cols["lead_distance"] <= 0)

    row_numbers = np.arange(1, n + 1)  # 1-based data rows, header excluded

    def reject(mask: np.ndarray, reason: str):
        nonlocal bad
        if not mask.any():
            return
        if not skip_bad_rows:
            rows = row_numbers[mask][:20].tolist()
            raise InvalidRows(
                f"{int(mask.sum())} row(s) rejected ({reason}); "
                f"first offending data rows: {rows}. "
                "Re-run with the skip-bad-rows policy to drop them instead.",
                rows=rows,
            )
        bad |= mask

    reject(bad, "unparsable or out-of-domain values")

    keep = ~bad
    skipped = int(bad.sum())
    for name in cols:
        cols[name] = cols[name][keep]
    row_numbers = row_numbers[keep]

    # Sort by timestamp (stable, so equal stamps keep file order for the
    # duplicate diagnostic below).
    order = np.argsort(cols["timestamp"], kind="stable")
    for name in cols:
        cols[name] = cols[name][order]
    row_numbers = row_numbers[order]

    # Odometer must not go backwards in time. Rows that dip below the
    # running maximum are bad rows like any other.
    odo_bad = _odometer_violations(cols["odometer"])
    if odo_bad.any():
        if not skip_bad_rows:
            rows = row_numbers[odo_bad][:20].tolist()
            raise InvalidRows(
                f"{int(odo_bad.sum())} row(s) rejected (odometer decreasing); "
                f"first offending data rows: {rows}.",
                rows=rows,
            )
        skipped += int(odo_bad.sum())
        keep = ~odo_bad
        for name in cols:
            cols[name] = cols[name][keep]

    if len(cols["timestamp"]) < 2:
        raise EmptyLog(
            f"trip log {ride_id!r} has {len(cols['timestamp'])} valid sample(s); need at least 2"
        )

    dup = np.diff(cols["timestamp"]) == 0
    if dup.any():
        raise NonMonotonicTime(
            f"{int(dup.sum())} duplicate timestamp(s) after sorting, "
            f"first at t={cols['timestamp'][:-1][dup][0]!r}"
        )

    return TripLog(
        ride_id=ride_id,
        timestamp=cols["timestamp"],
        speed=cols["speed"],
        lead_distance=cols["lead_distance"],
        accel=cols["accel"],
        cruise_on=cols["cruise_on"] != 0,
        odometer=cols["odometer"],
        source_meta=source_meta or {},
        skipped_rows=skipped,
    )


def _read_frame(text: str) -> tuple[pd.DataFrame, np.ndarray | None]:
    """Read the CSV; fast typed path first, string fallback for bad cells.

    Returns the frame with numeric (float) columns plus a per-row mask of
    cells that held garbage (non-numeric, non-empty) — None on the fast
    path where no such cells can exist.
    """
    try:
        frame = pd.read_csv(
            io.StringIO(text),
            dtype={k: float for k in _NUMERIC_DTYPES},
            skip_blank_lines=True,
        )
        return frame, None
    except pd.errors.EmptyDataError:
        raise SchemaMismatch("trip log is empty (no header row)") from None
    except pd.errors.ParserError as e:
        raise SchemaMismatch(f"unreadable CSV: {e}") from None
    except (ValueError, TypeError):
        pass  # some cell failed float conversion; diagnose below

    try:
        raw = pd.read_csv(io.StringIO(text), dtype=str, skip_blank_lines=True)
    except pd.errors.ParserError as e:
        raise SchemaMismatch(f"unreadable CSV: {e}") from None

    bad_rows = np.zeros(len(raw), dtype=bool)
    out = {}
    for name in raw.columns:
        if name not in _NUMERIC_DTYPES:
            continue
        stripped = raw[name].str.strip()
        coerced = pd.to_numeric(stripped, errors="coerce")
        garbage = coerced.isna() & stripped.notna() & (stripped != "")
        bad_rows |= garbage.to_numpy()
        out[name] = coerced.to_numpy(dtype=float)
    return pd.DataFrame(out), bad_rows


def _odometer_violations(odometer: np.ndarray) -> np.ndarray:
    """Mark rows whose odometer dips below the running maximum."""
    present = np.isfinite(odometer)
    bad = np.zeros(len(odometer), dtype=bool)
    if present.sum() < 2:
        return bad
    vals = odometer[present]
    if (np.diff(vals) >= 0).all():
        return bad
    running = np.maximum.accumulate(vals)
    # A row is bad when it is below the maximum of the rows before it.
    below = np.empty(len(vals), dtype=bool)
    below[0] = False
    below[1:] = vals[1:] < running[:-1]
    bad[np.flatnonzero(present)[below]] = True
    return bad


def _validate_log(log: TripLog) -> None:
    if len(log) < 2:
        raise EmptyLog(f"trip log {log.ride_id!r} has {len(log)} sample(s); need at least 2")
    d = np.diff(log.timestamp)
    if (d < 0).any():
        order = np.argsort(log.timestamp, kind="stable")
        for name in ("timestamp", "speed", "lead_distance", "accel", "cruise_on", "odometer"):
            setattr(log, name, getattr(log, name)[order])
        d = np.diff(log.timestamp)
    if (d == 0).any():
        raise NonMonotonicTime("duplicate timestamps in sample list")


# --- resampling -----------------------------------------------------------

def resample(log: TripLog, rate_hz: float = DEFAULT_RATE_HZ) -> UniformTrace:
    """Resample a trip log onto a uniform grid from t0 to t_end.

    speed / lead_distance / accel / odometer are linearly interpolated;
    cruise state is a zero-order hold of the most recent raw sample.
    lead_distance stays absent at any grid point whose bracketing raw
    samples are not both present — interpolation never invents a lead
    vehicle across a detection gap.
    """
    if not 1.0 <= rate_hz <= 100.0:
        raise ConfigError(f"rate_hz must be within [1, 100], got {rate_hz}")

    t = log.timestamp
    duration = float(t[-1] - t[0])
    n_grid = int(np.floor(duration * rate_hz + 1e-9)) + 1
    if n_grid < 2:
        raise DurationTooShort(
            f"log spans {duration:.3f}s, fewer than 2 grid points at {rate_hz} Hz"
        )
    grid = t[0] + np.arange(n_grid) / rate_hz

    speed = _interp(grid, t, log.speed)
    lead = _interp(grid, t, log.lead_distance)

    hold = np.clip(np.searchsorted(t, grid, side="right") - 1, 0, len(t) - 1)
    cruise = log.cruise_on[hold]

    odo_present = np.isfinite(log.odometer)
    if odo_present.sum() >= 2:
        odo = np.interp(grid, t[odo_present], log.odometer[odo_present])
        distance_km = odo - odo[0]
    else:
        dt = 1.0 / rate_hz
        step_km = (speed[1:] + speed[:-1]) * 0.5 * dt / 1000.0
        distance_km = np.concatenate(([0.0], np.cumsum(step_km)))

    # A CAN-logged acceleration signal is used only when every raw sample
    # carries it; a patchy signal would splice measured and derived accel.
    accel = None
    if np.isfinite(log.accel).all():
        accel = _interp(grid, t, log.accel)

    return UniformTrace(
        ride_id=log.ride_id,
        rate_hz=float(rate_hz),
        t0=float(t[0]),
        speed=speed,
        lead_distance=lead,
        cruise_on=cruise,
        distance_km=distance_km,
        accel=accel,
    )


def _interp(grid: np.ndarray, t: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Linear interpolation that propagates NaN instead of bridging it.

    A grid point landing exactly on a raw sample takes that sample's
    value, so NaN in the other bracket cannot leak into an exact hit.
    """
    idx = np.clip(np.searchsorted(t, grid, side="right") - 1, 0, len(t) - 2)
    t_left = t[idx]
    t_right = t[idx + 1]
    w = (grid - t_left) / (t_right - t_left)
    left = values[idx]
    right = values[idx + 1]
    with np.errstate(invalid="ignore"):
        out = left + w * (right - left)
    out = np.where(w <= 0.0, left, out)
    out = np.where(w >= 1.0, right, out)
    return out


# --- derived kinematics -----------------------------------------------------

def derive_acceleration(
    trace: UniformTrace,
    *,
    smooth: bool = False,
    smooth_window: int = 5,
) -> UniformTrace:
    """Fill the acceleration array of a trace.

    A CAN-supplied acceleration (interpolated at resample time) is used
    directly; otherwise accel is the central difference of speed with
    one-sided differences at the ends. The optional moving average
    (odd window, default 5) is applied before jerk is computed; it is off
    by default so raw behaviour stays reproducible.
    """
    if trace.accel is not None:
        accel = trace.accel.astype(float, copy=True)
    else:
        accel = _central_difference(trace.speed, trace.dt)
    if smooth:
        accel = _moving_average(accel, smooth_window)
    return replace(trace, accel=accel)


def compute_jerk(trace: UniformTrace) -> UniformTrace:
    """Fill the jerk array: central difference of accel at the grid rate."""
    if trace.accel is None:
        raise ValueError("trace has no acceleration; call derive_acceleration first")
    jerk = _central_difference(trace.accel, trace.dt)
    return replace(trace, jerk=jerk)


def _central_difference(values: np.ndarray, dt: float) -> np.ndarray:
    out = np.empty_like(values, dtype=float)
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * dt)
    out[0] = (values[1] - values[0]) / dt
    out[-1] = (values[-1] - values[-2]) / dt
    return out


def _moving_average(values: np.ndarray, window: int) -> np.ndarray:
    if window < 1 or window % 2 == 0:
        raise ConfigError(f"smoothing window must be a positive odd number, got {window}")
    if window == 1 or len(values) < 2:
        return values.copy()
    half = window // 2
    padded = np.pad(values, half, mode="edge")
    kernel = np.full(window, 1.0 / window)
    return np.convolve(padded, kernel, mode="valid")
