/**
 * Trend charts: one small line chart per headline metric (the three
 * indices and the cruise-control ON percentage), one point per stored
 * ride. Absent values are gaps in the line, never zeros.
 */

import type { TrendSeries } from "../api.js";
import { fmt, shortDate } from "../format.js";
import { htmlEl, svgEl } from "../svg.js";

const W = 300;
const H = 110;
const PAD = 10;

export const TREND_METRICS = [
  "safety_index.all",
  "fuel_index.all",
  "comfort_index.all",
  "acc_on_percent",
];

function chart(series: TrendSeries): HTMLElement {
  const wrap = htmlEl("figure", "trend-chart");
  wrap.append(htmlEl("figcaption", "", series.metric));
  const svg = svgEl("svg", { viewBox: `0 0 ${W} ${H}`, width: W, height: H });
  const points = series.points;
  const n = points.length;
  const x = (i: number) => (n <= 1 ? W / 2 : PAD + (i / (n - 1)) * (W - 2 * PAD));
  const y = (v: number) => H - PAD - (v / 100) * (H - 2 * PAD);

  // line segments only between consecutive present points: gaps stay visible
  for (let i = 0; i + 1 < n; i++) {
    const a = points[i].value;
    const b = points[i + 1].value;
    if (a === null || b === null) continue;
    svg.append(
      svgEl("line", { class: "trend-line", x1: x(i), y1: y(a), x2: x(i + 1), y2: y(b) }),
    );
  }
  points.forEach((point, i) => {
    if (point.value === null) {
      svg.append(svgEl("circle", { class: "trend-gap", cx: x(i), cy: H - PAD, r: 2 }));
      return;
    }
    svg.append(
      svgEl("circle", {
        class: "trend-dot",
        cx: x(i),
        cy: y(point.value),
        r: 3,
        "data-value": fmt(point.value),
        "data-date": shortDate(point.started_at),
      }),
    );
  });
  wrap.append(svg);
  return wrap;
}

export function renderTrends(container: HTMLElement, series: TrendSeries[]): void {
  container.replaceChildren();
  for (const s of series) {
    container.append(chart(s));
  }
}
