"""Each metric kernel on inputs small enough to check by hand.

Run:  python demos/02_metric_kernels.py
"""

import numpy as np

from drivefit import (
    Thresholds,
    UniformTrace,
    classify_zones,
    comfort_result,
    fcr,
    fuel_index,
    fuel_result,
    headway_series,
    segment_by_cruise,
    ttc_series,
)


def tiny_trace(speed, lead=None, cruise=None, accel=None, jerk=None):
    speed = np.asarray(speed, dtype=float)
    n = len(speed)
    step_km = (speed[1:] + speed[:-1]) * 0.5 * 0.1 / 1000.0
    return UniformTrace(
        ride_id="demo",
        rate_hz=10.0,
        t0=0.0,
        speed=speed,
        lead_distance=np.full(n, np.nan) if lead is None else np.asarray(lead, dtype=float),
        cruise_on=np.zeros(n, dtype=bool) if cruise is None else np.asarray(cruise, dtype=bool),
        distance_km=np.concatenate(([0.0], np.cumsum(step_km))),
        accel=None if accel is None else np.asarray(accel, dtype=float),
        jerk=None if jerk is None else np.asarray(jerk, dtype=float),
    )


# --- headway and the two-second-rule zones ------------------------------------
print("== headway ==")
trace = tiny_trace([20.0, 20.0, 0.05, 20.0], lead=[40.0, 25.0, 15.0, np.nan])
h = headway_series(trace)
print(f"40m at 20 m/s  -> {h[0]} s        (direct division)")
print(f"25m at 20 m/s  -> {h[1]} s")
print(f"15m stationary -> {h[2]}          (stopped ego is not tailgating)")
print(f"no lead        -> {h[3]}          (absent, excluded from zoning)")

zoning = classify_zones(np.array([0.5, 1.5, 3.0, np.inf]))
print(f"headways [0.5, 1.5, 3, inf] -> alert/attention/safe fractions "
      f"{zoning.alert_fraction}/{zoning.attention_fraction}/{zoning.safe_fraction}, "
      f"safety index {zoning.safety_index}")

# --- time to collision (detail views only) --------------------------------------
print("\n== time to collision ==")
n = 30
closing = tiny_trace(np.full(n, 25.0), lead=50.0 - 5.0 * np.arange(n) / 10.0)
print(f"50m gap closing at 5 m/s -> TTC {ttc_series(closing)[0]:.1f} s")
steady = tiny_trace(np.full(n, 25.0), lead=np.full(n, 50.0))
print(f"matched speeds           -> TTC {ttc_series(steady)[0]} (not closing)")

# --- the fuel consumption-rate model ----------------------------------------------
print("\n== fuel model ==")
print(f"idle                    -> {fcr(0.0, 0.0)} L/100km")
print(f"100 kph cruise          -> {fcr(100.0, 0.0)} L/100km")
print(f"hard braking (-30 m/s2) -> {fcr(0.0, -30.0)} L/100km (clamped at zero)")

v = 100.0 / 3.6
res = fuel_result(tiny_trace(np.full(3601, v), accel=np.zeros(3601)))
print(f"10 km at a steady 100 kph -> {res.fuel_liters:.2f} L, {res.fuel_efficiency:.2f} km/L "
      f"(= 100 / rate identity)")

print(f"min-max fuel index: 7.03 km/L against population [6.26, 8.19, 7.03] -> "
      f"{fuel_index([6.26, 8.19, 7.03], 7.03):.1f}%")

# --- comfort: strict accel/jerk limits ----------------------------------------------
print("\n== comfort ==")
n = 10
at_limit = tiny_trace(np.full(n, 20.0), accel=np.full(n, 2.0), jerk=np.zeros(n))
beyond = tiny_trace(np.full(n, 20.0), accel=np.full(n, 2.1), jerk=np.zeros(n))
print(f"accel exactly 2.0 m/s^2 -> comfort {comfort_result(at_limit).comfort_index} (strict limit)")
print(f"accel 2.1 m/s^2         -> comfort {comfort_result(beyond).comfort_index}")
print(f"limits: accel > {Thresholds().accel_hi} or < {Thresholds().accel_lo}, "
      f"|jerk| > {Thresholds().jerk_abs}")

# --- cruise segmentation ---------------------------------------------------------------
print("\n== cruise segmentation ==")
seg = segment_by_cruise(tiny_trace(np.full(5, 10.0), cruise=[0, 0, 1, 1, 0]))
print(f"cruise [0,0,1,1,0] -> runs {seg.segments}, ACC ON {seg.acc_on_percent}%")
