"""Persisting rides and reading the trend / comparison reports back.

Stores eight synthetic rides of gradually improving safety, then shows the
append-only layout on disk, the per-metric trend series, and the
recent-vs-previous-vs-rolling-average comparison with change rates.

Run:  python demos/03_store_trends_comparison.py
"""

import tempfile
from pathlib import Path

import numpy as np

from drivefit import AppConfig, RideStore, ingest_csv


def trip_csv(start_epoch: float, tail_gap_s: float, acc_share: float) -> bytes:
    """A 4-minute drive; tail_gap_s sets the typical headway, acc_share the ON block."""
    rows = ["timestamp,speed,lead_distance,accel,cruise_on,odometer"]
    n = 2400
    for i in range(n):
        t = start_epoch + i * 0.1
        v = 22.0 + 3.0 * np.sin(i / 300.0)
        gap = max(tail_gap_s + 1.1 * np.sin(i / 180.0), 0.3)  # wanders across zones
        cruise = 1 if i < n * acc_share else 0
        rows.append(f"{t:.1f},{v:.4f},{gap * v:.3f},,{cruise},")
    return ("\n".join(rows) + "\n").encode()


root = Path(tempfile.mkdtemp()) / "rides"
store = RideStore(root)
config = AppConfig(store=str(root))

day = 86400.0
t0 = 1716000000.0
for i in range(8):
    gap = 0.8 + 0.35 * i          # tailgating early on, safe by the end
    data = trip_csv(t0 + i * day, gap, acc_share=0.3 + 0.05 * i)
    ingest_csv(data, f"day-{i + 1}", store, config)

print(f"store at {root}:")
for p in sorted(root.rglob("*")):
    if p.is_file():
        print(f"  {p.relative_to(root)}  ({p.stat().st_size} bytes)")

print("\nsafety_index.all trend (one point per ride, time-ordered):")
for point in store.trend_series("safety_index.all").points:
    bar = "#" * int(point.value / 2)
    print(f"  {point.started_at[:10]}  {point.value:6.1f}  {bar}")

report = store.comparison_report("day-8", window=5)
print(f"\nday-8 vs the previous ride and the average of the {report.window} before it:")
print(f"  {'metric':<26}{'recent':>9}{'prev':>9}{'avg':>9}{'Δ prev %':>10}{'Δ avg %':>10}")
for metric in ("safety_index.all", "fuel_efficiency_kmpl.all", "comfort_index.all", "acc_on_percent"):
    recent = report.recent.metric_value(metric)
    prev = report.previous.metric_value(metric)
    avg = report.rolling_avg.metric_value(metric)
    print(
        f"  {metric:<26}{recent:>9.2f}{prev:>9.2f}{avg:>9.2f}"
        f"{report.change_to_prev[metric]:>10.1f}{report.change_to_avg[metric]:>10.1f}"
    )

print("\nthe store is append-only: re-ingesting day-1 raises DuplicateRideId")
