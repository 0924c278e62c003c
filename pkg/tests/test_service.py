"""HTTP API tests: contracts, cache behaviour, layer equivalence with the store."""

from __future__ import annotations

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from drivefit.config import AppConfig
from drivefit.pipeline import ingest_csv, summarize_csv
from drivefit.service import MAX_SERIES_POINTS, create_app
from drivefit.store import RideStore
from drivefit.summary import canonical_json

from conftest import FIXTURE_CSV, csv_text, seed_reference_store


@pytest.fixture()
def client(tmp_path):
    config = AppConfig(store=str(tmp_path / "store"))
    app = create_app(config)
    with TestClient(app) as c:
        c.config = config
        yield c


def _store_of(client) -> RideStore:
    return client.app.state.store


def test_empty_store_lists_empty(client):
    r = client.get("/rides")
    assert r.status_code == 200
    assert r.json() == []


def test_rides_listed_time_ascending(client):
    seed_reference_store(client.config.store)  # stored later rides have later starts
    r = client.get("/rides")
    rows = r.json()
    assert len(rows) == 7
    stamps = [row["started_at"] for row in rows]
    assert stamps == sorted(stamps)
    assert rows[-1]["ride_id"] == "recent"
    assert set(rows[0]) >= {
        "ride_id", "started_at", "distance_km", "safety_index_all",
        "fuel_index_all", "fuel_efficiency_kmpl_all", "comfort_index_all",
    }


def test_list_idempotent_same_etag_same_body(client):
    store = _store_of(client)
    ingest_csv(FIXTURE_CSV.read_bytes(), "r1", store, client.config)
    a = client.get("/rides")
    b = client.get("/rides")
    assert a.headers["etag"] == b.headers["etag"]
    assert a.content == b.content
    not_modified = client.get("/rides", headers={"If-None-Match": a.headers["etag"]})
    assert not_modified.status_code == 304


def test_ride_detail_passthrough_and_downsample(client):
    store = _store_of(client)
    result = ingest_csv(FIXTURE_CSV.read_bytes(), "r1", store, client.config)
    r = client.get("/rides/r1")
    assert r.status_code == 200
    body = r.json()
    # summary slots equal store values exactly
    assert canonical_json(body["summary"]) == canonical_json(store.load_ride("r1").to_json_dict())
    diag = body["diagnostics"]
    n_full = len(result.diagnostics)
    assert n_full > MAX_SERIES_POINTS
    for series in ("t", "headway", "zone", "fcr", "violation", "cruise_on", "speed", "ttc"):
        assert len(diag[series]) <= MAX_SERIES_POINTS
    assert body["diagnostics_total_samples"] == n_full


def test_downsampled_zone_fractions_close_to_full(client):
    store = _store_of(client)
    result = ingest_csv(FIXTURE_CSV.read_bytes(), "r1", store, client.config)
    body = client.get("/rides/r1").json()
    zones = [z for z in body["diagnostics"]["zone"] if z is not None]
    full_codes = result.diagnostics.zone_code
    full = full_codes[full_codes >= 0]
    for name, code in (("alert", 0), ("attention", 1), ("safe", 2)):
        down_frac = zones.count(name) / len(zones)
        full_frac = float((full == code).sum()) / len(full)
        assert abs(down_frac - full_frac) < 0.02, name


def test_ride_detail_unknown_404(client):
    r = client.get("/rides/missing")
    assert r.status_code == 404
    assert r.json()["error"] == "RideNotFound"


def test_detail_diagnostics_null_without_cache(client, tmp_path):
    seed_reference_store(client.config.store)
    body = client.get("/rides/recent").json()
    assert body["diagnostics"] is None


def test_comparison_endpoint_matches_store(client):
    seed_reference_store(client.config.store)
    r = client.get("/rides/recent/comparison", params={"window": 5})
    assert r.status_code == 200
    report = _store_of(client).comparison_report("recent", 5)
    assert canonical_json(r.json()) == canonical_json(report.to_json_dict())
    assert r.json()["change_to_avg"]["safety_index.on"] == pytest.approx(-9.8, abs=0.1)


def test_comparison_unknown_ride_404(client):
    assert client.get("/rides/nope/comparison").status_code == 404


def test_trends_endpoint_byte_equal_to_store(client):
    seed_reference_store(client.config.store)
    r = client.get("/trends", params={"metric": "safety_index.all"})
    assert r.status_code == 200
    store_doc = _store_of(client).trend_series("safety_index.all").to_json_dict()
    assert r.content.decode() == json.dumps(store_doc, ensure_ascii=False, allow_nan=False)
    assert len(r.json()["points"]) == 7


def test_trends_unknown_metric_400_lists_names(client):
    r = client.get("/trends", params={"metric": "bogus"})
    assert r.status_code == 400
    assert "safety_index.all" in r.json()["valid_metrics"]


def test_ingest_roundtrip_equals_library(client):
    data = FIXTURE_CSV.read_bytes()
    r = client.post(
        "/ingest", params={"ride_id": "via-api"}, content=data,
        headers={"Content-Type": "text/csv"},
    )
    assert r.status_code == 200
    lib = summarize_csv(data, "via-api", client.config)
    assert canonical_json(r.json()) == canonical_json(lib.summary.to_json_dict())
    # and it was durably stored
    assert "via-api" in _store_of(client)


def test_ingest_multipart_upload(client):
    r = client.post(
        "/ingest",
        params={"ride_id": "upload"},
        files={"file": ("trip.csv", FIXTURE_CSV.read_bytes(), "text/csv")},
    )
    assert r.status_code == 200
    assert r.json()["ride_id"] == "upload"


def test_ingest_header_only_400(client):
    r = client.post(
        "/ingest", params={"ride_id": "x"},
        content=b"timestamp,speed,lead_distance,accel,cruise_on,odometer\n",
        headers={"Content-Type": "text/csv"},
    )
    assert r.status_code == 400
    assert r.json()["error"] == "EmptyLog"


def test_ingest_duplicate_409(client):
    data = FIXTURE_CSV.read_bytes()
    assert client.post("/ingest", params={"ride_id": "dup"}, content=data).status_code == 200
    r = client.post("/ingest", params={"ride_id": "dup"}, content=data)
    assert r.status_code == 409
    assert r.json()["error"] == "DuplicateRideId"


def test_ingest_schema_mismatch_400(client):
    r = client.post("/ingest", params={"ride_id": "bad"}, content=b"a,b\n1,2\n")
    assert r.status_code == 400
    assert r.json()["error"] == "SchemaMismatch"


def test_ingest_skip_bad_rows_param(client):
    rows = [(0.0, 1, None, None, 0, None), (0.1, "junk", None, None, 0, None),
            (0.2, 1, None, None, 0, None), (0.3, 1, None, None, 0, None)]
    body = csv_text(rows).encode()
    strict = client.post("/ingest", params={"ride_id": "strict"}, content=body)
    assert strict.status_code == 400
    lax = client.post("/ingest", params={"ride_id": "lax", "skip_bad_rows": "true"}, content=body)
    assert lax.status_code == 200


def test_full_precision_numbers_roundtrip(client):
    data = FIXTURE_CSV.read_bytes()
    client.post("/ingest", params={"ride_id": "p"}, content=data)
    api_value = client.get("/rides/p").json()["summary"]["fuel_efficiency_kmpl"]["all"]
    store_value = _store_of(client).load_ride("p").fuel_efficiency_kmpl.all
    assert api_value == store_value  # exact float equality, no display rounding


def test_infinite_headway_serialized_as_string(client):
    rows = [(round(i * 0.1, 4), 0.05, 15.0, None, 0, None) for i in range(31)]
    client.post("/ingest", params={"ride_id": "still"}, content=csv_text(rows).encode())
    diag = client.get("/rides/still").json()["diagnostics"]
    assert set(diag["headway"]) == {"inf"}
    assert set(diag["zone"]) == {"safe"}


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}
