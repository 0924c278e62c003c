"""The HTTP surface a dashboard consumes, exercised in-process.

Walks every endpoint against a temporary store using the test client (no
sockets needed); `drivefit serve` exposes exactly the same app over
HTTP/1.1. Full schemas and golden examples: docs/api.md.

Run:  python demos/04_http_api.py
"""

import json
import tempfile

import numpy as np
from fastapi.testclient import TestClient

from drivefit import AppConfig
from drivefit.service import create_app


def trip_csv(start_epoch: float, seed: int) -> bytes:
    rng = np.random.default_rng(seed)
    rows = ["timestamp,speed,lead_distance,accel,cruise_on,odometer"]
    for i in range(3000):
        t = start_epoch + i * 0.1
        v = 20.0 + 4.0 * np.sin(i / 250.0) + rng.normal(0, 0.05)
        lead = f"{v * rng.uniform(0.7, 3.5):.2f}" if i % 7 else ""
        rows.append(f"{t:.1f},{v:.4f},{lead},,{int(i % 1000 < 450)},")
    return ("\n".join(rows) + "\n").encode()


config = AppConfig(store=str(tempfile.mkdtemp()) + "/store")
client = TestClient(create_app(config))

print("POST /ingest — parse, score and persist a ride:")
for i, name in enumerate(("mon", "tue", "wed")):
    r = client.post(
        "/ingest", params={"ride_id": name},
        content=trip_csv(1716000000.0 + i * 86400, seed=i),
        headers={"Content-Type": "text/csv"},
    )
    body = r.json()
    print(f"  {name}: {r.status_code}, safety all {body['safety_index']['all']:.1f}, "
          f"comfort all {body['comfort_index']['all']:.1f}")

print("\nGET /rides — headers, time-ascending, with a manifest ETag:")
r = client.get("/rides")
etag = r.headers["etag"]
for row in r.json():
    print(f"  {row['ride_id']}: {row['distance_km']:.1f} km, safety {row['safety_index_all']:.1f}")
print(f"  ETag {etag} -> {client.get('/rides', headers={'If-None-Match': etag}).status_code} on revalidation")

print("\nGET /rides/wed — summary plus cached diagnostics (≤ 2000 points/series):")
detail = client.get("/rides/wed").json()
diag = detail["diagnostics"]
print(f"  stride {detail['diagnostics_stride']} over {detail['diagnostics_total_samples']} samples;"
      f" series: {', '.join(sorted(diag))}")
print(f"  first headway points: {diag['headway'][:4]}  (\"inf\"/null encode non-finite/absent)")

print("\nGET /rides/wed/comparison?window=5 — the dashboard comparison panel:")
report = client.get("/rides/wed/comparison", params={"window": 5}).json()
changes = report["change_to_prev"]
for metric in ("safety_index.all", "fuel_index.all", "comfort_index.all", "acc_on_percent"):
    print(f"  {metric:<22} change to prev {changes[metric]:+.1f}%")

print("\nGET /trends?metric=comfort_index.all:")
points = client.get("/trends", params={"metric": "comfort_index.all"}).json()["points"]
print("  " + " -> ".join(f"{p['value']:.1f}" for p in points))

print("\nerrors are structured:")
print(f"  unknown ride    -> {client.get('/rides/nope').status_code}")
bad = client.get("/trends", params={"metric": "bogus"})
print(f"  unknown metric  -> {bad.status_code}, valid names included "
      f"({len(bad.json()['valid_metrics'])} of them)")
dup = client.post("/ingest", params={"ride_id": "mon"}, content=trip_csv(0, 9))
print(f"  duplicate ride  -> {dup.status_code}")
