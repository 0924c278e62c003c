"""Ride store: persistence contracts, rolling averages, change rates, trends."""

from __future__ import annotations

import json

import numpy as np
import pytest

from drivefit.diagnostics import Diagnostics
from drivefit.errors import DuplicateRideId, RideNotFound, UnknownMetric, ZeroBaseline
from drivefit.store import (
    RideStore,
    build_comparison_report,
    build_trend_series,
    change_rate,
    rolling_average,
)
from drivefit.summary import MetricTriple, RideSummary, canonical_json, epoch_to_iso

from conftest import (
    EXPECTED_CHANGE_TO_AVG,
    EXPECTED_CHANGE_TO_PREV,
    LOOSE_CHANGE_TO_AVG,
    REFERENCE_ROWS,
    reference_summaries,
    reference_summary,
    seed_reference_store,
)


def _summary(ride_id: str, ordinal: int = 0, safety_all: float = 90.0, on_slots: bool = True) -> RideSummary:
    on = 95.0 if on_slots else None
    return RideSummary(
        ride_id=ride_id,
        started_at=epoch_to_iso(1716000000.0 + 60.0 * ordinal),
        duration_s=300.0,
        distance_km=5.0,
        mean_speed_kph=60.0,
        acc_on_percent=50.0 if on_slots else 0.0,
        safety_index=MetricTriple(on, 85.0, safety_all),
        fuel_index=MetricTriple(on, 20.0, 30.0),
        fuel_efficiency_kmpl=MetricTriple(8.0 if on_slots else None, 6.0, 7.0),
        comfort_index=MetricTriple(on, 90.0, 92.0),
    )


def _tiny_diag(n: int = 6) -> Diagnostics:
    return Diagnostics(
        t=np.arange(n) / 10.0,
        speed=np.full(n, 10.0),
        accel=np.zeros(n),
        jerk=np.zeros(n),
        cruise_on=np.arange(n) % 2 == 0,
        lead_distance=np.array([20.0, np.nan] * (n // 2)),
        headway=np.array([2.0, np.nan] * (n // 2)),
        ttc=np.array([np.inf, np.nan] * (n // 2)),
        zone_code=np.array([2, -1] * (n // 2), dtype=np.int8),
        fcr=np.full(n, 7.0),
        violation=np.zeros(n, dtype=bool),
        distance_km=np.arange(n) * 0.001,
    )


# --- store_ride / load -----------------------------------------------------------

def test_store_roundtrip_byte_for_byte(tmp_path):
    store = RideStore(tmp_path / "store")
    s = _summary("ride-1")
    assert store.store_ride(s) == 0
    loaded = store.load_ride("ride-1")
    assert canonical_json(loaded.to_json_dict()) == canonical_json(s.to_json_dict())


def test_store_duplicate_id_rejected(tmp_path):
    store = RideStore(tmp_path / "store")
    store.store_ride(_summary("ride-1"))
    with pytest.raises(DuplicateRideId):
        store.store_ride(_summary("ride-1", ordinal=5))
    assert len(store) == 1


def test_store_hundred_rides_in_insertion_order(tmp_path):
    store = RideStore(tmp_path / "store")
    rng = np.random.default_rng(2)
    offsets = rng.permutation(100)  # started_at deliberately not in insertion order
    for i in range(100):
        assert store.store_ride(_summary(f"r{i:03d}", ordinal=int(offsets[i]))) == i
    listed = store.list_rides()
    assert [s.ride_id for s in listed] == [f"r{i:03d}" for i in range(100)]
    by_time = store.list_rides_by_time()
    stamps = [s.started_at for s in by_time]
    assert stamps == sorted(stamps)


def test_store_opaque_ride_ids(tmp_path):
    store = RideStore(tmp_path / "store")
    weird = "trip/2024-05-18 08:00 #1"
    store.store_ride(_summary(weird))
    assert store.load_ride(weird).ride_id == weird
    assert weird in store


def test_store_unknown_ride(tmp_path):
    store = RideStore(tmp_path / "store")
    with pytest.raises(RideNotFound):
        store.load_ride("nope")


def test_store_diagnostics_roundtrip(tmp_path):
    store = RideStore(tmp_path / "store")
    diag = _tiny_diag()
    store.store_ride(_summary("ride-1"), diag)
    back = store.load_diagnostics("ride-1")
    np.testing.assert_array_equal(back.zone_code, diag.zone_code)
    np.testing.assert_allclose(back.headway, diag.headway)
    assert np.isinf(back.ttc[0])
    assert store.load_diagnostics("ride-1").to_json_dict()["zone"][1] is None


def test_store_append_only_superset(tmp_path):
    store = RideStore(tmp_path / "store")
    seen: list[str] = []
    for i in range(5):
        store.store_ride(_summary(f"r{i}", ordinal=i))
        ids = store.ride_ids()
        assert ids[: len(seen)] == seen  # stable prefix, never mutated
        seen = ids
        store.trend_series("safety_index.all")
        if i:
            store.comparison_report(f"r{i}", window=3)
    assert len(store) == 5


def test_store_etag_tracks_content(tmp_path):
    store = RideStore(tmp_path / "store")
    e0 = store.manifest_etag()
    assert store.manifest_etag() == e0
    store.store_ride(_summary("r1"))
    e1 = store.manifest_etag()
    assert e1 != e0
    assert RideStore(tmp_path / "store").manifest_etag() == e1


def test_single_file_store_parity(tmp_path):
    store = RideStore(tmp_path / "rides.json")
    diag = _tiny_diag()
    store.store_ride(_summary("a", ordinal=0), diag)
    store.store_ride(_summary("b", ordinal=1))
    with pytest.raises(DuplicateRideId):
        store.store_ride(_summary("a"))
    again = RideStore(tmp_path / "rides.json")
    assert again.ride_ids() == ["a", "b"]
    assert canonical_json(again.load_ride("a").to_json_dict()) == canonical_json(
        _summary("a", ordinal=0).to_json_dict()
    )
    back = again.load_diagnostics("a")
    np.testing.assert_allclose(back.fcr, diag.fcr)
    assert again.load_diagnostics("b") is None
    # one human-inspectable document on disk
    doc = json.loads((tmp_path / "rides.json").read_text())
    assert set(doc) == {"schema_version", "rides", "summaries", "diagnostics"}


def test_store_fe_population(tmp_path):
    store = RideStore(tmp_path / "store")
    store.store_ride(_summary("a", ordinal=0))
    store.store_ride(_summary("b", ordinal=1, on_slots=False))
    assert store.fe_population() == [8.0, 6.0, 7.0, 6.0, 7.0]


# --- change_rate --------------------------------------------------------------

def test_change_rate_reference_values():
    assert change_rate(90.2, 100.0) == pytest.approx(-9.8, abs=1e-12)
    assert round(change_rate(52.6, 3.1), 1) == 1596.8
    assert round(change_rate(24.9, 17.6), 1) == 41.5


def test_change_rate_zero_baseline():
    with pytest.raises(ZeroBaseline):
        change_rate(5.0, 0.0)


def test_change_rate_identity_and_antisymmetry():
    for x in (0.3, 42.0, 97.5):
        assert change_rate(x, x) == 0.0
    assert change_rate(12.0, 10.0) == -change_rate(8.0, 10.0)


# --- rolling_average ------------------------------------------------------------

def test_rolling_average_of_identical_rides():
    rides = [_summary(f"r{i}", ordinal=i) for i in range(4)]
    avg = rolling_average(rides)
    assert avg.safety_index.all == rides[0].safety_index.all
    assert avg.fuel_efficiency_kmpl.on == rides[0].fuel_efficiency_kmpl.on
    assert avg.acc_on_percent == rides[0].acc_on_percent


def test_rolling_average_hand_mean():
    a = _summary("a", safety_all=94.2)
    b = _summary("b", ordinal=1, safety_all=87.6)
    assert rolling_average([a, b]).safety_index.all == pytest.approx(90.9)


def test_rolling_average_presence_aware():
    rides = [_summary(f"p{i}", ordinal=i) for i in range(2)] + [
        _summary(f"q{i}", ordinal=2 + i, on_slots=False) for i in range(3)
    ]
    avg = rolling_average(rides)
    assert avg.safety_index.on == 95.0  # mean over the two rides that have it
    assert avg.fuel_efficiency_kmpl.on == 8.0
    avg_none = rolling_average([_summary("x", on_slots=False)])
    assert avg_none.safety_index.on is None  # absent in all -> absent


def test_rolling_average_window_of_one_is_identity():
    s = _summary("solo")
    avg = rolling_average([s])
    for metric in ("safety_index", "fuel_index", "fuel_efficiency_kmpl", "comfort_index"):
        assert getattr(avg, metric) == getattr(s, metric)


# --- comparison report ------------------------------------------------------------

def test_comparison_reproduces_reference_change_rates(tmp_path):
    store = seed_reference_store(tmp_path / "store")
    report = store.comparison_report("recent", window=5)

    avg = report.rolling_avg
    for name, expected in REFERENCE_ROWS["avg"].items():
        if name == "acc_on_percent":
            assert avg.acc_on_percent == pytest.approx(expected, abs=1e-9)
        else:
            for slot, value in zip(("on", "off", "all"), expected):
                assert getattr(avg, name).slot(slot) == pytest.approx(value, abs=1e-9)

    for metric, expected in EXPECTED_CHANGE_TO_PREV.items():
        assert report.change_to_prev[metric] == pytest.approx(expected, abs=0.1), metric
    for metric, expected in EXPECTED_CHANGE_TO_AVG.items():
        assert report.change_to_avg[metric] == pytest.approx(expected, abs=0.1), metric
    for metric, published in LOOSE_CHANGE_TO_AVG.items():
        assert report.change_to_avg[metric] == pytest.approx(published, abs=1.5), metric


def test_comparison_single_ride(tmp_path):
    store = RideStore(tmp_path / "store")
    store.store_ride(_summary("only"))
    report = store.comparison_report("only")
    assert report.previous is None
    assert report.rolling_avg is None
    assert all(v is None for v in report.change_to_prev.values())
    assert all(v is None for v in report.change_to_avg.values())


def test_comparison_window_saturates(tmp_path):
    store = RideStore(tmp_path / "store")
    for i in range(3):
        store.store_ride(_summary(f"r{i}", ordinal=i, safety_all=80.0 + i))
    report = store.comparison_report("r2", window=10)
    assert report.rolling_avg.safety_index.all == pytest.approx(80.5)  # both priors


def test_comparison_window_includes_recent_option():
    rides = [_summary(f"r{i}", ordinal=i, safety_all=80.0 + i) for i in range(3)]
    report = build_comparison_report(rides, "r2", window=3, window_includes_recent=True)
    assert report.rolling_avg.safety_index.all == pytest.approx(81.0)


def test_comparison_unknown_ride(tmp_path):
    store = RideStore(tmp_path / "store")
    store.store_ride(_summary("a"))
    with pytest.raises(RideNotFound):
        store.comparison_report("b")


def test_comparison_storage_transparency(tmp_path):
    rides = reference_summaries()
    in_memory = build_comparison_report(rides, "recent", 5)
    store = seed_reference_store(tmp_path / "store")
    from_store = store.comparison_report("recent", 5)
    assert canonical_json(from_store.to_json_dict()) == canonical_json(in_memory.to_json_dict())


def test_comparison_previous_is_chronological_not_insertion(tmp_path):
    store = RideStore(tmp_path / "store")
    store.store_ride(_summary("late", ordinal=10))
    store.store_ride(_summary("early", ordinal=0))
    store.store_ride(_summary("mid", ordinal=5))
    report = store.comparison_report("late")
    assert report.previous.ride_id == "mid"


# --- trend series ---------------------------------------------------------------

def test_trends_time_ordered_points(tmp_path):
    store = RideStore(tmp_path / "store")
    for i, off in enumerate((5, 0, 9)):
        store.store_ride(_summary(f"r{i}", ordinal=off))
    series = store.trend_series("safety_index.all")
    assert len(series.points) == 3
    stamps = [p.started_at for p in series.points]
    assert stamps == sorted(stamps)


def test_trends_absent_points_preserved(tmp_path):
    store = RideStore(tmp_path / "store")
    store.store_ride(_summary("off-only", on_slots=False))
    series = store.trend_series("safety_index.on")
    assert series.points[0].value is None  # a gap, not a zero


def test_trends_unknown_metric_lists_valid_names(tmp_path):
    store = RideStore(tmp_path / "store")
    with pytest.raises(UnknownMetric) as err:
        store.trend_series("bogus")
    assert "safety_index.all" in err.value.valid
    assert "acc_on_percent" in err.value.valid


def test_trends_match_generator():
    values = [70.0, 75.5, 80.2, 91.0]
    rides = [_summary(f"r{i}", ordinal=i, safety_all=v) for i, v in enumerate(values)]
    series = build_trend_series(rides, "safety_index.all")
    assert [p.value for p in series.points] == values
    assert [p.ordinal for p in series.points] == [0, 1, 2, 3]
