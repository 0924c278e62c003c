"""From raw decoded CAN rows to a scored ride, step by step.

Builds a small synthetic trip (irregular sampling, a lead-detection gap,
one cruise block, one hard brake), then walks the pipeline stages that
`drivefit ingest` composes: parse -> resample -> derive -> summarize.

Run:  python demos/01_ingest_and_summarize.py
"""

import numpy as np

from drivefit import compute_jerk, derive_acceleration, parse_trip_log, resample, summarize_trip

rng = np.random.default_rng(1)

# --- fabricate a 5-minute trip log ------------------------------------------
rows = ["timestamp,speed,lead_distance,accel,cruise_on,odometer"]
t = 0.0
speed = 14.0
for i in range(2600):
    t += rng.uniform(0.08, 0.15)            # irregular CAN cadence
    if 90 < t < 92:
        speed -= 4.2 * 0.115                 # hard brake: ~-4.2 m/s^2
    else:
        speed += rng.normal(0, 0.05)
    speed = max(speed, 0.5)
    lead = f"{speed * (1.6 + np.sin(t / 30)):.2f}" if (t % 60) < 45 else ""
    cruise = 1 if 120 <= t < 240 else 0
    rows.append(f"{t:.3f},{speed:.4f},{lead},,{cruise},")
csv_data = "\n".join(rows)

# --- stage 1: parse & validate ------------------------------------------------
log = parse_trip_log(csv_data, "demo-ride")
print(f"parsed {len(log)} samples spanning {log.duration_s:.1f}s")

# --- stage 2: resample onto a uniform 10 Hz grid -------------------------------
trace = resample(log, rate_hz=10.0)
print(f"resampled to {len(trace)} grid points at {trace.rate_hz:.0f} Hz; "
      f"distance {trace.distance_km[-1]:.2f} km (integrated from speed)")
gap = np.isnan(trace.lead_distance).mean()
print(f"lead vehicle absent on {gap:.0%} of the grid — gaps are never interpolated across")

# --- stage 3: derive acceleration and jerk --------------------------------------
trace = compute_jerk(derive_acceleration(trace))
print(f"accel range [{trace.accel.min():.2f}, {trace.accel.max():.2f}] m/s^2, "
      f"|jerk| up to {np.abs(trace.jerk).max():.1f} m/s^3")

# --- stage 4: the ride summary ---------------------------------------------------
summary = summarize_trip(trace)
print()
print(f"ride {summary.ride_id} started {summary.started_at}")
print(f"  duration {summary.duration_s:.0f}s, distance {summary.distance_km:.2f} km, "
      f"mean speed {summary.mean_speed_kph:.0f} kph, ACC ON {summary.acc_on_percent:.1f}%")
for name in ("safety_index", "fuel_index", "fuel_efficiency_kmpl", "comfort_index"):
    triple = getattr(summary, name)
    fmt = lambda v: "—" if v is None else f"{v:.1f}"
    print(f"  {name:<22} ON {fmt(triple.on):>6}  OFF {fmt(triple.off):>6}  All {fmt(triple.all):>6}")
