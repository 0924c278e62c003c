/**
 * Per-ride detail strips from the cached diagnostic series:
 *   - headway samples colored by zone, infinite headway clipped at the top
 *     of the safe band,
 *   - consumption rate over time with cruise-ON intervals shaded,
 *   - comfort violation markers over the accel trace.
 *
 * Rides stored without diagnostics render per-panel placeholders.
 */

import type { Diagnostics, RideDetail, SeriesValue } from "../api.js";
import { htmlEl, svgEl } from "../svg.js";

const W = 640;
const H = 120;
const HEADWAY_CAP_S = 4; // chart top; inf clips here, still colored safe

function xAt(i: number, n: number): number {
  return n <= 1 ? 0 : (i / (n - 1)) * W;
}

function panel(title: string): { root: HTMLElement; body: HTMLElement } {
  const root = htmlEl("section", "detail-panel");
  root.append(htmlEl("h3", "", title));
  const body = htmlEl("div", "detail-body");
  root.append(body);
  return { root, body };
}

function placeholder(text: string): HTMLElement {
  return htmlEl("p", "panel-placeholder", text);
}

function cruiseShading(svg: SVGSVGElement, cruise: boolean[]): void {
  const n = cruise.length;
  let runStart: number | null = null;
  for (let i = 0; i <= n; i++) {
    const onNow = i < n && cruise[i];
    if (onNow && runStart === null) runStart = i;
    if (!onNow && runStart !== null) {
      svg.append(
        svgEl("rect", {
          class: "cruise-shade",
          x: xAt(runStart, n),
          y: 0,
          width: Math.max(xAt(i - 1, n) - xAt(runStart, n), 1),
          height: H,
        }),
      );
      runStart = null;
    }
  }
}

function strip(): SVGSVGElement {
  return svgEl("svg", { viewBox: `0 0 ${W} ${H}`, width: W, height: H, class: "detail-strip" });
}

export function renderRideDetail(container: HTMLElement, detail: RideDetail): void {
  container.replaceChildren();
  const diag = detail.diagnostics;

  const safety = panel("Headway zones");
  const fuel = panel("Consumption rate");
  const comfort = panel("Comfort violations");
  container.append(safety.root, fuel.root, comfort.root);

  if (!diag) {
    const note = "no cached diagnostics for this ride";
    safety.body.append(placeholder(note));
    fuel.body.append(placeholder(note));
    comfort.body.append(placeholder(note));
    return;
  }

  renderHeadwayStrip(safety.body, diag);
  renderFuelStrip(fuel.body, diag);
  renderComfortStrip(comfort.body, diag);
}

function renderHeadwayStrip(body: HTMLElement, diag: Diagnostics): void {
  if (diag.zone.every((z) => z === null)) {
    body.append(placeholder("no leader detected on this drive"));
    return;
  }
  const svg = strip();
  cruiseShading(svg, diag.cruise_on);
  const n = diag.headway.length;
  diag.headway.forEach((value: SeriesValue, i: number) => {
    const zone = diag.zone[i];
    if (value === null || zone === null) return; // no lead: a gap in the strip
    const capped = value === "inf" || value === "-inf"
      ? HEADWAY_CAP_S
      : Math.min(value as number, HEADWAY_CAP_S);
    const y = H - (capped / HEADWAY_CAP_S) * (H - 6);
    const mark = svgEl("rect", {
      class: `zone-${zone}${value === "inf" ? " headway-inf" : ""}`,
      x: xAt(i, n),
      y,
      width: Math.max(W / n, 1),
      height: H - y,
    });
    svg.append(mark);
  });
  body.append(svg);
  body.append(htmlEl("p", "strip-caption", "zone bands: alert ≤ 1 s, attention ≤ 2 s, safe above; ∞ clipped at top"));
}

function renderFuelStrip(body: HTMLElement, diag: Diagnostics): void {
  const svg = strip();
  cruiseShading(svg, diag.cruise_on);
  const n = diag.fcr.length;
  const top = Math.max(...diag.fcr, 1);
  const points = diag.fcr
    .map((rate: number, i: number) => `${xAt(i, n)},${H - (rate / top) * (H - 8)}`)
    .join(" ");
  svg.append(svgEl("polyline", { class: "fcr-line", points, fill: "none" }));
  body.append(svg);
  body.append(htmlEl("p", "strip-caption", "shaded intervals: cruise control engaged"));
}

function renderComfortStrip(body: HTMLElement, diag: Diagnostics): void {
  const svg = strip();
  cruiseShading(svg, diag.cruise_on);
  const n = diag.accel.length;
  const amax = Math.max(...diag.accel.map(Math.abs), 1);
  const points = diag.accel
    .map((a: number, i: number) => `${xAt(i, n)},${H / 2 - (a / amax) * (H / 2 - 6)}`)
    .join(" ");
  svg.append(svgEl("polyline", { class: "accel-line", points, fill: "none" }));
  diag.violation.forEach((isViolation: boolean, i: number) => {
    if (!isViolation) return;
    svg.append(
      svgEl("circle", {
        class: "violation-mark",
        cx: xAt(i, n),
        cy: H / 2 - (diag.accel[i] / amax) * (H / 2 - 6),
        r: 2.5,
      }),
    );
  });
  body.append(svg);
  const count = diag.violation.filter(Boolean).length;
  body.append(htmlEl("p", "strip-caption", `${count} violation sample(s) marked`));
}
