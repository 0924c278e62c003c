"""Per-ride metric kernels: safety zoning, fuel model, comfort, cruise splits.

All kernels are pure functions of their inputs; they never touch storage,
so many trips can be scored in parallel. Absent values are NaN inside
arrays and ``None`` for scalars.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyPopulation
from .ingest import UniformTrace, compute_jerk, derive_acceleration
from .summary import MetricTriple, RideSummary, epoch_to_iso

MPS_TO_KPH = 3.6

ZONE_ABSENT, ZONE_ALERT, ZONE_ATTENTION, ZONE_SAFE = -1, 0, 1, 2
ZONE_NAMES = {ZONE_ABSENT: None, ZONE_ALERT: "alert", ZONE_ATTENTION: "attention", ZONE_SAFE: "safe"}


@dataclass(frozen=True)
class FuelParams:
    """Coefficients of the consumption-rate model, all in L/100km terms.

    rate = base + rolling * v_kph + drag * v_kph^2 + accel_gain * accel
    (accel in m/s^2), clamped below at zero.
    """

    base: float = 5.0        # idle consumption, L/100km
    rolling: float = 0.05    # rolling resistance, L/100km per kph
    drag: float = 0.001      # aerodynamic drag, L/100km per kph^2
    accel_gain: float = 0.2  # acceleration effect, L/100km per m/s^2

    def validate(self) -> None:
        if self.base <= 0:
            raise ValueError(f"base consumption must be > 0, got {self.base}")
        if self.rolling < 0 or self.drag < 0:
            raise ValueError("rolling and drag coefficients must be >= 0")


@dataclass(frozen=True)
class Thresholds:
    """Zone boundaries and comfort limits, one knob set for the whole pipeline."""

    v_eps: float = 0.1               # m/s; below this the ego counts as stationary
    alert_headway_s: float = 1.0     # headway <= this: alert zone
    attention_headway_s: float = 2.0  # alert < headway <= this: attention zone
    accel_hi: float = 2.0            # m/s^2, violation when exceeded
    accel_lo: float = -3.5           # m/s^2, violation when undercut
    jerk_abs: float = 5.0            # m/s^3, violation when |jerk| exceeds
    no_lead: str = "exclude"         # "exclude" or "safe": how zoning counts no-lead samples

    def validate(self) -> None:
        if self.v_eps <= 0:
            raise ValueError(f"v_eps must be > 0, got {self.v_eps}")
        if not 0 < self.alert_headway_s < self.attention_headway_s:
            raise ValueError("need 0 < alert boundary < attention boundary")
        if self.accel_hi <= 0:
            raise ValueError(f"accel_hi must be > 0, got {self.accel_hi}")
        if self.accel_lo >= 0:
            raise ValueError(f"accel_lo must be < 0, got {self.accel_lo}")
        if self.jerk_abs <= 0:
            raise ValueError(f"jerk_abs must be > 0, got {self.jerk_abs}")
        if self.no_lead not in ("exclude", "safe"):
            raise ValueError(f"no_lead must be 'exclude' or 'safe', got {self.no_lead!r}")


@dataclass
class SafetyZoning:
    """Headway zone occupancy over the samples with a detected lead."""

    alert_fraction: float
    attention_fraction: float
    safe_fraction: float
    safety_index: float  # percent: attention + safe share
    headway: np.ndarray
    zone_codes: np.ndarray  # int8 per sample, ZONE_* constants
    considered_samples: int


@dataclass
class FuelResult:
    """Modeled fuel use over a trace."""

    fcr: np.ndarray  # L/100km at each sample
    fuel_liters: float
    fuel_efficiency: float | None  # km/L; None when no distance was covered
    distance_km: float


@dataclass
class ComfortResult:
    """Share of samples violating the acceleration/jerk comfort limits."""

    discomfort_fraction: float
    comfort_index: float  # percent comfortable
    violation_mask: np.ndarray


@dataclass
class CruiseSegments:
    """Maximal constant-cruise-state runs as half-open index ranges."""

    segments: list[tuple[bool, int, int]]
    acc_on_percent: float


# --- safety ---------------------------------------------------------------

def headway_series(trace: UniformTrace, v_eps: float = 0.1) -> np.ndarray:
    """Time headway to the lead vehicle, seconds per sample.

    NaN where no lead is detected; +inf below ``v_eps`` — a stationary ego
    behind a detected lead is not a tailgating risk.
    """
    if v_eps <= 0:
        raise ValueError(f"v_eps must be > 0, got {v_eps}")
    speed = trace.speed
    lead = trace.lead_distance
    out = np.full(len(trace), np.nan)
    present = np.isfinite(lead)
    moving = present & (speed >= v_eps)
    out[moving] = lead[moving] / speed[moving]
    out[present & ~moving] = np.inf
    return out


def lead_speed_series(trace: UniformTrace) -> np.ndarray:
    """Lead-vehicle speed estimate: ego speed plus the spacing derivative.

    Central differences of lead_distance; NaN wherever the spacing or its
    neighbours are absent, since a detection gap breaks the derivative.
    """
    lead = trace.lead_distance
    n = len(trace)
    d_lead = np.full(n, np.nan)
    if n >= 3:
        d_lead[1:-1] = (lead[2:] - lead[:-2]) / (2.0 * trace.dt)
    if n >= 2:
        d_lead[0] = (lead[1] - lead[0]) / trace.dt
        d_lead[-1] = (lead[-1] - lead[-2]) / trace.dt
    return trace.speed + d_lead


def ttc_series(trace: UniformTrace, lead_speed: np.ndarray | None = None) -> np.ndarray:
    """Time to collision, seconds per sample; diagnostics only.

    D / (v_ego - v_lead) while the ego closes on the lead, +inf otherwise,
    NaN where there is no lead (or no usable lead-speed estimate). The
    safety index deliberately uses headway instead: TTC goes infinite in
    every non-closing regime, which makes it a poor ride-level statistic.
    """
    if lead_speed is None:
        lead_speed = lead_speed_series(trace)
    lead = trace.lead_distance
    out = np.full(len(trace), np.nan)
    usable = np.isfinite(lead) & np.isfinite(lead_speed)
    closing = np.full(len(trace), False)
    closing[usable] = trace.speed[usable] > lead_speed[usable]
    out[usable & ~closing] = np.inf
    m = usable & closing
    out[m] = lead[m] / (trace.speed[m] - lead_speed[m])
    return out


def zone_codes(headway: np.ndarray, thresholds: Thresholds = Thresholds()) -> np.ndarray:
    """Zone label per headway sample (two-second-rule bands).

    <= alert boundary: alert; up to the attention boundary: attention;
    beyond (including inf): safe. No-lead samples follow the ``no_lead``
    policy: excluded from zoning, or counted as safe.
    """
    codes = np.full(len(headway), ZONE_ABSENT, dtype=np.int8)
    present = ~np.isnan(headway)
    h = headway
    codes[present & (h <= thresholds.alert_headway_s)] = ZONE_ALERT
    codes[present & (h > thresholds.alert_headway_s) & (h <= thresholds.attention_headway_s)] = ZONE_ATTENTION
    codes[present & (h > thresholds.attention_headway_s)] = ZONE_SAFE
    if thresholds.no_lead == "safe":
        codes[~present] = ZONE_SAFE
    return codes


def classify_zones(headway: np.ndarray, thresholds: Thresholds = Thresholds()) -> SafetyZoning | None:
    """Zone fractions and safety index over a headway series.

    Returns None when no sample has a lead (nothing to zone — a
    lead-free drive carries no tailgating evidence either way).
    """
    codes = zone_codes(headway, thresholds)
    considered = int((codes != ZONE_ABSENT).sum())
    if considered == 0:
        return None
    alert = int((codes == ZONE_ALERT).sum()) / considered
    attention = int((codes == ZONE_ATTENTION).sum()) / considered
    safe = int((codes == ZONE_SAFE).sum()) / considered
    return SafetyZoning(
        alert_fraction=alert,
        attention_fraction=attention,
        safe_fraction=safe,
        safety_index=100.0 * (attention + safe),
        headway=headway,
        zone_codes=codes,
        considered_samples=considered,
    )


# --- fuel -----------------------------------------------------------------

def fcr(speed_kph, accel, params: FuelParams = FuelParams()):
    """Instantaneous fuel consumption rate, L/100km.

    Affine-quadratic in speed plus a linear acceleration term, clamped at
    zero: hard deceleration would otherwise drive the model negative and
    fuel burn cannot be negative (no regenerative braking here).
    """
    raw = params.base + params.rolling * speed_kph + params.drag * speed_kph * speed_kph
    raw = raw + params.accel_gain * accel
    return np.maximum(raw, 0.0)


def fuel_result(trace: UniformTrace, params: FuelParams = FuelParams()) -> FuelResult:
    """Modeled fuel use over a trace.

    Each grid step burns distance * rate / 100 liters with the rate
    evaluated at the step-start sample; speeds convert to kph here and
    nowhere else. fuel_efficiency is None for a zero-distance (idle)
    trace — undefined, not zero.
    """
    if trace.accel is None:
        trace = derive_acceleration(trace)
    rate = fcr(trace.speed * MPS_TO_KPH, trace.accel, params)
    step_km = np.diff(trace.distance_km)
    step_fuel = step_km * rate[:-1] / 100.0
    fuel_liters = float(step_fuel.sum())
    distance = float(trace.distance_km[-1])
    efficiency = distance / fuel_liters if distance > 0 and fuel_liters > 0 else None
    return FuelResult(
        fcr=rate,
        fuel_liters=fuel_liters,
        fuel_efficiency=efficiency,
        distance_km=distance,
    )


def fuel_index(fe_values, current: float) -> float:
    """Min-max scale a fuel-efficiency value against a population, percent.

    The population must already include ``current`` (the caller appends the
    ride's own values to the stored history). A degenerate population
    (max == min) maps to 50.0.
    """
    values = [v for v in fe_values if v is not None]
    if not values:
        raise EmptyPopulation("fuel-index population is empty")
    lo = min(values)
    hi = max(values)
    if hi == lo:
        return 50.0
    # ratio before scaling: multiply-first can round a hair past 100.0
    index = 100.0 * ((current - lo) / (hi - lo))
    return min(max(index, 0.0), 100.0)


# --- comfort ----------------------------------------------------------------

def comfort_violations(accel: np.ndarray, jerk: np.ndarray, thresholds: Thresholds = Thresholds()) -> np.ndarray:
    """Per-sample discomfort mask; all four comparisons are strict."""
    return (
        (accel > thresholds.accel_hi)
        | (accel < thresholds.accel_lo)
        | (jerk > thresholds.jerk_abs)
        | (jerk < -thresholds.jerk_abs)
    )


def comfort_result(trace: UniformTrace, thresholds: Thresholds = Thresholds()) -> ComfortResult:
    """Share of comfortable samples, from acceleration and jerk limits."""
    if trace.accel is None:
        trace = derive_acceleration(trace)
    if trace.jerk is None:
        trace = compute_jerk(trace)
    return _comfort_from_arrays(trace.accel, trace.jerk, thresholds)


def _comfort_from_arrays(accel: np.ndarray, jerk: np.ndarray, thresholds: Thresholds) -> ComfortResult:
    mask = comfort_violations(accel, jerk, thresholds)
    fraction = float(mask.mean()) if len(mask) else 0.0
    return ComfortResult(
        discomfort_fraction=fraction,
        comfort_index=100.0 * (1.0 - fraction),
        violation_mask=mask,
    )


# --- cruise state -----------------------------------------------------------

def segment_by_cruise(trace: UniformTrace) -> CruiseSegments:
    """Maximal runs of constant cruise state covering the trace exactly."""
    cruise = trace.cruise_on
    n = len(cruise)
    bounds = np.concatenate(([0], np.flatnonzero(np.diff(cruise)) + 1, [n]))
    segments = [
        (bool(cruise[start]), int(start), int(end))
        for start, end in zip(bounds[:-1], bounds[1:])
    ]
    return CruiseSegments(
        segments=segments,
        acc_on_percent=100.0 * float(cruise.mean()) if n else 0.0,
    )


# --- whole-ride summary -------------------------------------------------------

def summarize_trip(
    trace: UniformTrace,
    params: FuelParams = FuelParams(),
    thresholds: Thresholds = Thresholds(),
    *,
    fe_population=(),
    smooth_accel: bool = False,
    smooth_window: int = 5,
) -> RideSummary:
    """Score one ride: every metric over ON samples, OFF samples and all.

    ``fe_population`` is the historical fuel-efficiency population the
    min-max index is scaled against; the current ride's own values are
    appended to it, so with no history the ride is scaled against itself.
    Slots for a cruise state with zero samples stay None.
    """
    # A trace with both accel and jerk was prepared by the caller and is
    # used as-is; smoothing only applies while we finish an unprepared one.
    if trace.jerk is None:
        if trace.accel is None or smooth_accel:
            trace = derive_acceleration(trace, smooth=smooth_accel, smooth_window=smooth_window)
        trace = compute_jerk(trace)

    on = trace.cruise_on
    off = ~on
    masks = {"on": on, "off": off, "all": np.ones(len(trace), dtype=bool)}

    headway = headway_series(trace, thresholds.v_eps)
    safety = {}
    for name, mask in masks.items():
        if not mask.any():
            safety[name] = None
            continue
        zoning = classify_zones(headway[mask], thresholds)
        safety[name] = None if zoning is None else zoning.safety_index

    comfort = {}
    for name, mask in masks.items():
        if not mask.any():
            comfort[name] = None
            continue
        comfort[name] = _comfort_from_arrays(trace.accel[mask], trace.jerk[mask], thresholds).comfort_index

    # Fuel is a per-step quantity; a step belongs to the cruise state at its
    # start, matching the rate being evaluated at the step-start sample.
    rate = fcr(trace.speed * MPS_TO_KPH, trace.accel, params)
    step_km = np.diff(trace.distance_km)
    step_fuel = step_km * rate[:-1] / 100.0
    step_state = on[:-1]
    fe = {}
    for name, mask in (("on", step_state), ("off", ~step_state), ("all", np.ones(len(step_km), dtype=bool))):
        if not mask.any():
            fe[name] = None
            continue
        dist = float(step_km[mask].sum())
        fuel = float(step_fuel[mask].sum())
        fe[name] = dist / fuel if dist > 0 and fuel > 0 else None

    population = list(fe_population) + [v for v in fe.values() if v is not None]
    fe_index = {
        name: (fuel_index(population, value) if value is not None else None)
        for name, value in fe.items()
    }

    duration = trace.duration_s
    distance = float(trace.distance_km[-1])
    summary = RideSummary(
        ride_id=trace.ride_id,
        started_at=epoch_to_iso(trace.t0),
        duration_s=duration,
        distance_km=distance,
        mean_speed_kph=distance / (duration / 3600.0),
        acc_on_percent=100.0 * float(on.mean()),
        safety_index=MetricTriple(**safety),
        fuel_index=MetricTriple(**fe_index),
        fuel_efficiency_kmpl=MetricTriple(**fe),
        comfort_index=MetricTriple(**comfort),
    )
    summary.validate()
    return summary
