"""Command-line front door: ingest, summarize, compare, trends, export, serve.

Exit codes: 0 success, 1 input error (bad file, schema, unknown ride or
metric, bad config), 2 internal error. Output is deterministic for a given
(input bytes, config): data rows never carry wall-clock timestamps that
were not in the log itself.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from .config import AppConfig, load_config
from .errors import ConfigError, DriveFitError, StorageFailure
from .metrics import ZONE_NAMES
from .pipeline import ingest_csv, summarize_csv
from .store import DEFAULT_WINDOW, RideStore
from .summary import RideSummary, published_metric_names

COMPARE_ROW_LABELS = (
    "Avg. of nearest {n} rides",
    "Previous ride",
    "Recent ride",
    "Change rate (to avg.)",
    "Change rate (to prev.)",
)

_PARAM_KEYS = {"base": "fuel_base", "rolling": "fuel_rolling", "drag": "fuel_drag", "accel_gain": "fuel_accel_gain"}
_THRESHOLD_KEYS = (
    "v_eps", "alert_headway_s", "attention_headway_s", "accel_hi", "accel_lo", "jerk_abs", "no_lead",
)


def _parse_kv(text: str | None, allowed: dict, what: str) -> dict:
    """Parse 'k=v,k=v' flag text into config-key overrides."""
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in allowed:
            raise ConfigError(
                f"bad --{what} entry {item!r}; known keys: {', '.join(sorted(allowed))}"
            )
        out[allowed[key]] = value.strip()
    return out


def _build_config(ctx_obj: dict, **extra) -> AppConfig:
    overrides = dict(ctx_obj.get("overrides", {}))
    overrides.update({k: v for k, v in extra.items() if v is not None})
    return load_config(ctx_obj.get("config_path"), overrides=overrides)


@click.group()
@click.option("--store", "store_path", type=click.Path(), default=None, help="Ride store path (directory, or .json for single-file mode).")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file (key = value lines).")
@click.pass_context
def cli(ctx, store_path, config_path):
    """Trip analytics for decoded CAN-bus logs."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["overrides"] = {}
    if store_path is not None:
        ctx.obj["overrides"]["store"] = store_path


@cli.command()
@click.argument("files", nargs=-1, required=True, type=click.Path())
@click.option("--ride-id", default=None, help="Ride id (single file only; default: file stem).")
@click.option("--skip-bad-rows", is_flag=True, help="Drop and count bad rows instead of rejecting the file.")
@click.option("--rate-hz", type=float, default=None, help="Resample rate, [1, 100].")
@click.pass_context
def ingest(ctx, files, ride_id, skip_bad_rows, rate_hz):
    """Parse, score and append trip CSVs to the store."""
    if ride_id is not None and len(files) != 1:
        raise ConfigError("--ride-id only makes sense with a single file")
    config = _build_config(ctx.obj, rate_hz=rate_hz)
    store = RideStore(config.store)
    for name in files:
        path = Path(name)
        if not path.exists():
            raise click.ClickException(f"no such file: {path}")
        data = path.read_bytes()
        rid = ride_id or path.stem
        result = ingest_csv(data, rid, store, config, skip_bad_rows=skip_bad_rows)
        if result.skipped_rows:
            click.echo(f"{rid}: skipped {result.skipped_rows} bad row(s)", err=True)
        click.echo(f"stored {rid} ({result.summary.distance_km:.1f} km, {len(result.trace)} samples)")


@cli.command()
@click.argument("file", type=click.Path())
@click.option("--params", default=None, help="Fuel model overrides, e.g. 'base=5,rolling=0.05,drag=0.001,accel_gain=0.2'.")
@click.option("--thresholds", default=None, help="Threshold overrides, e.g. 'accel_hi=2,jerk_abs=5,v_eps=0.1'.")
@click.option("--rate-hz", type=float, default=None, help="Resample rate, [1, 100].")
@click.option("--json", "as_json", is_flag=True, help="Emit the RideSummary document instead of a table.")
@click.option("--skip-bad-rows", is_flag=True)
@click.pass_context
def summarize(ctx, file, params, thresholds, rate_hz, as_json, skip_bad_rows):
    """Score one trip CSV and print the ride summary (no store writes).

    With --store pointing at an existing store, the fuel index is scaled
    against that history; otherwise against the ride's own values.
    """
    path = Path(file)
    if not path.exists():
        raise click.ClickException(f"no such file: {path}")
    overrides = _parse_kv(params, _PARAM_KEYS, "params")
    overrides.update(_parse_kv(thresholds, {k: k for k in _THRESHOLD_KEYS}, "thresholds"))
    config = _build_config(ctx.obj, rate_hz=rate_hz, **overrides)
    population = ()
    store_flagged = "store" in ctx.obj["overrides"]
    if store_flagged and _store_exists(config.store):
        population = RideStore(config.store).fe_population()
    result = summarize_csv(
        path.read_bytes(), path.stem, config,
        fe_population=population, skip_bad_rows=skip_bad_rows,
    )
    if result.skipped_rows:
        click.echo(f"skipped {result.skipped_rows} bad row(s)", err=True)
    if as_json:
        click.echo(json.dumps(result.summary.to_json_dict(), indent=2, sort_keys=True))
    else:
        click.echo(_summary_table(result.summary))


@cli.command()
@click.option("--ride", "ride_id", required=True, help="Ride id to compare (the 'recent' ride).")
@click.option("--window", type=int, default=None, help="Rolling-average window N (default from config).")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def compare(ctx, ride_id, window, as_json):
    """Recent vs previous vs rolling-average comparison table."""
    config = _build_config(ctx.obj)
    store = RideStore(config.store)
    report = store.comparison_report(
        ride_id,
        window if window is not None else config.window,
        window_includes_recent=config.window_includes_recent,
    )
    if as_json:
        click.echo(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    else:
        click.echo(_compare_table(report))


@cli.command()
@click.option("--metric", required=True, help="One of the published metric slots, e.g. safety_index.all.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def trends(ctx, metric, as_json):
    """Per-ride time series of one metric."""
    config = _build_config(ctx.obj)
    series = RideStore(config.store).trend_series(metric)
    if as_json:
        click.echo(json.dumps(series.to_json_dict(), indent=2, sort_keys=True))
        return
    click.echo(f"# {series.metric}")
    click.echo("ordinal  started_at                 value")
    for p in series.points:
        value = "—" if p.value is None else f"{p.value:.1f}"
        click.echo(f"{p.ordinal:<8d} {p.started_at:<26s} {value}")


@cli.command()
@click.option("--ride", "ride_id", default=None, help="Ride id (not needed for --what trends).")
@click.option("--what", required=True, type=click.Choice(["headway", "fuel", "comfort", "trends"]))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--state", type=click.Choice(["all", "on", "off"]), default="all", help="Restrict samples to a cruise state.")
@click.pass_context
def export(ctx, ride_id, what, out_path, state):
    """Write plot-ready CSV series (full precision) for one ride or the trends."""
    config = _build_config(ctx.obj)
    store = RideStore(config.store)
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    if what == "trends":
        _export_trends(store, out)
        click.echo(f"wrote {out}")
        return
    if ride_id is None:
        raise ConfigError("--ride is required unless --what trends")
    diag = store.load_diagnostics(ride_id)
    if diag is None:
        raise click.ClickException(f"ride {ride_id!r} has no cached diagnostics to export")
    rows = _export_rows(diag, what, state)
    header = {"headway": ("t", "headway", "zone", "cruise_on"),
              "fuel": ("t", "speed_kph", "fcr", "distance_km", "cruise_on"),
              "comfort": ("t", "accel", "jerk", "violation", "cruise_on")}[what]
    with open(out, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    if not rows:
        click.echo(f"warning: no samples in cruise state {state!r}; wrote header only", err=True)
    click.echo(f"wrote {out} ({len(rows)} rows)")


@cli.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.pass_context
def serve(ctx, host, port):
    """Run the local HTTP API (see docs/api.md for the endpoints)."""
    config = _build_config(ctx.obj, host=host, port=port)
    from .service import run

    run(config)


# --- rendering helpers -------------------------------------------------------

def _fmt(value: float | None, decimals: int = 1) -> str:
    return "—" if value is None else f"{value:.{decimals}f}"


def _summary_table(s: RideSummary) -> str:
    lines = [
        f"Ride       : {s.ride_id}",
        f"Started    : {s.started_at}",
        f"Duration   : {s.duration_s:.1f} s",
        f"Distance   : {s.distance_km:.2f} km",
        f"Mean speed : {s.mean_speed_kph:.1f} kph",
        f"ACC ON %   : {s.acc_on_percent:.1f}",
        "",
        f"{'Metric':<24}{'ON':>8}{'OFF':>8}{'All':>8}",
    ]
    for label, triple in (
        ("Safety Index (%)", s.safety_index),
        ("Fuel Effic. Index (%)", s.fuel_index),
        ("Fuel Effic. (km/L)", s.fuel_efficiency_kmpl),
        ("Comfort Index (%)", s.comfort_index),
    ):
        lines.append(
            f"{label:<24}{_fmt(triple.on):>8}{_fmt(triple.off):>8}{_fmt(triple.all):>8}"
        )
    return "\n".join(lines)


def _compare_table(report) -> str:
    groups = ("safety_index", "fuel_index", "fuel_efficiency_kmpl", "comfort_index")
    group_labels = ("Safety Index (%)", "Fuel Effic. Index (%)", "Fuel Effic. (km/L)", "Comfort Index (%)")
    label_w, cell_w = 26, 8

    def triple_cells(summary: RideSummary | None):
        cells = []
        for name in groups:
            for slot in ("on", "off", "all"):
                cells.append(None if summary is None else getattr(summary, name).slot(slot))
        cells.append(None if summary is None else summary.acc_on_percent)
        return cells

    def change_cells(changes: dict):
        cells = []
        for name in groups:
            for slot in ("on", "off", "all"):
                cells.append(changes[f"{name}.{slot}"])
        cells.append(changes["acc_on_percent"])
        return cells

    head1 = " " * label_w
    for label in group_labels:
        head1 += f"{label:<{cell_w * 3}}"
    head1 += "ACC ON %"
    head2 = " " * label_w + f"{'ON':>{cell_w - 1}} {'OFF':>{cell_w - 1}} {'All':>{cell_w - 1}} " * len(groups)

    rows = [
        (COMPARE_ROW_LABELS[0].format(n=report.window), triple_cells(report.rolling_avg)),
        (COMPARE_ROW_LABELS[1], triple_cells(report.previous)),
        (COMPARE_ROW_LABELS[2], triple_cells(report.recent)),
        (COMPARE_ROW_LABELS[3], change_cells(report.change_to_avg)),
        (COMPARE_ROW_LABELS[4], change_cells(report.change_to_prev)),
    ]
    lines = [head1.rstrip(), head2.rstrip()]
    for label, cells in rows:
        line = f"{label:<{label_w}}"
        for value in cells:
            line += f"{_fmt(value):>{cell_w - 1}} "
        lines.append(line.rstrip())
    return "\n".join(lines)


def _export_rows(diag, what: str, state: str) -> list:
    keep = [
        i for i in range(len(diag))
        if state == "all" or bool(diag.cruise_on[i]) == (state == "on")
    ]

    def num(v: float) -> str:
        import math

        if math.isnan(v):
            return ""
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)

    rows = []
    for i in keep:
        cruise = int(diag.cruise_on[i])
        if what == "headway":
            zone = ZONE_NAMES[int(diag.zone_code[i])] or ""
            rows.append((num(float(diag.t[i])), num(float(diag.headway[i])), zone, cruise))
        elif what == "fuel":
            rows.append((
                num(float(diag.t[i])),
                num(float(diag.speed[i]) * 3.6),
                num(float(diag.fcr[i])),
                num(float(diag.distance_km[i])),
                cruise,
            ))
        else:
            rows.append((
                num(float(diag.t[i])),
                num(float(diag.accel[i])),
                num(float(diag.jerk[i])),
                int(diag.violation[i]),
                cruise,
            ))
    return rows


def _export_trends(store: RideStore, out: Path) -> None:
    with open(out, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(("metric", "ordinal", "started_at", "value"))
        for metric in published_metric_names():
            series = store.trend_series(metric)
            for p in series.points:
                writer.writerow((metric, p.ordinal, p.started_at, "" if p.value is None else repr(p.value)))


def _store_exists(path: str) -> bool:
    p = Path(path)
    return (p.is_file() and p.suffix == ".json") or (p / "manifest.json").exists()


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.ClickException as e:
        click.echo(f"error: {e.format_message()}", err=True)
        sys.exit(1)
    except click.Abort:
        sys.exit(1)
    except StorageFailure as e:
        click.echo(f"storage error: {e}", err=True)
        sys.exit(2)
    except DriveFitError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    except Exception as e:  # noqa: BLE001 — last-resort boundary for exit code 2
        click.echo(f"internal error: {type(e).__name__}: {e}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
