/**
 * KPI spider chart: the three indices on 0-100 axes, with one overlay per
 * cruise slot (ON / OFF / All) and goal badges underneath.
 *
 * Absent slots draw nothing on their axis — the overlay outline simply has
 * a gap there — and a legend note explains why (e.g. an all-OFF drive has
 * no ACC samples). The radius scaling is pure rendering geometry; the only
 * numbers shown are API values.
 */

import type { MetricTriple, RideSummary } from "../api.js";
import { fmt } from "../format.js";
import { htmlEl, svgEl } from "../svg.js";
import type { Goals, OverlayToggles } from "../state.js";

const SIZE = 260;
const CENTER = SIZE / 2;
const RADIUS = 100;

interface Axis {
  label: string;
  triple: (s: RideSummary) => MetricTriple;
  goal: (g: Goals) => number | undefined;
}

const AXES: Axis[] = [
  { label: "Safety", triple: (s) => s.safety_index, goal: (g) => g.safety },
  { label: "Fuel efficiency", triple: (s) => s.fuel_index, goal: (g) => g.fuel },
  { label: "Comfort", triple: (s) => s.comfort_index, goal: (g) => g.comfort },
];

const SLOTS: (keyof OverlayToggles)[] = ["on", "off", "all"];

function axisPoint(axisIndex: number, value: number): { x: number; y: number } {
  const angle = -Math.PI / 2 + (axisIndex * 2 * Math.PI) / AXES.length;
  const r = (value / 100) * RADIUS;
  return { x: CENTER + r * Math.cos(angle), y: CENTER + r * Math.sin(angle) };
}

export function renderKpiPanel(
  container: HTMLElement,
  summary: RideSummary,
  goals: Goals,
  overlays: OverlayToggles,
): void {
  container.replaceChildren();
  const svg = svgEl("svg", {
    viewBox: `0 0 ${SIZE} ${SIZE}`,
    width: SIZE,
    height: SIZE,
    class: "kpi-radar",
    role: "img",
  });

  for (const ring of [25, 50, 75, 100]) {
    const ringPoints = AXES.map((_, i) => axisPoint(i, ring));
    svg.append(
      svgEl("polygon", {
        class: "radar-grid",
        points: ringPoints.map((p) => `${p.x},${p.y}`).join(" "),
      }),
    );
  }
  AXES.forEach((axis, i) => {
    const tip = axisPoint(i, 100);
    svg.append(svgEl("line", { class: "radar-axis", x1: CENTER, y1: CENTER, x2: tip.x, y2: tip.y }));
    const label = svgEl("text", {
      class: "radar-label",
      x: tip.x,
      y: tip.y + (tip.y < CENTER ? -8 : 14),
      "text-anchor": "middle",
    });
    label.textContent = axis.label;
    svg.append(label);
  });

  const notes: string[] = [];
  for (const slot of SLOTS) {
    if (!overlays[slot]) continue;
    const values = AXES.map((axis) => axis.triple(summary)[slot]);
    const present = values.filter((v) => v !== null);
    if (present.length === 0) {
      notes.push(slot === "on" ? "no ACC samples" : `no ${slot.toUpperCase()} samples`);
      continue;
    }
    if (present.length < AXES.length) {
      notes.push(`${slot.toUpperCase()} has gaps (metric undefined on some axes)`);
    }
    // outline segments only between adjacent present vertices: gaps stay gaps
    for (let i = 0; i < AXES.length; i++) {
      const a = values[i];
      const b = values[(i + 1) % AXES.length];
      if (a === null || b === null) continue;
      const pa = axisPoint(i, a);
      const pb = axisPoint((i + 1) % AXES.length, b);
      svg.append(
        svgEl("line", {
          class: `overlay-${slot} radar-edge`,
          x1: pa.x, y1: pa.y, x2: pb.x, y2: pb.y,
        }),
      );
    }
    values.forEach((value, i) => {
      if (value === null) return;
      const p = axisPoint(i, value);
      svg.append(
        svgEl("circle", {
          class: `overlay-${slot} radar-dot`,
          cx: p.x, cy: p.y, r: 3,
          "data-slot": slot,
          "data-axis": AXES[i].label,
          "data-value": fmt(value),
        }),
      );
    });
  }
  container.append(svg);

  const legend = htmlEl("div", "kpi-legend");
  for (const slot of SLOTS) {
    if (!overlays[slot]) continue;
    legend.append(htmlEl("span", `legend-swatch overlay-${slot}`, slot.toUpperCase()));
  }
  for (const note of notes) {
    legend.append(htmlEl("span", "legend-note", note));
  }
  container.append(legend);

  const badges = htmlEl("div", "goal-badges");
  AXES.forEach((axis) => {
    const goal = axis.goal(goals);
    if (goal === undefined) return;
    const value = axis.triple(summary).all;
    const badge = htmlEl("span", "goal-badge");
    if (value === null) {
      badge.classList.add("goal-nodata");
      badge.textContent = `${axis.label} ≥ ${fmt(goal, 0)}: no data`;
    } else {
      const met = value >= goal;
      badge.classList.add(met ? "goal-met" : "goal-unmet");
      badge.dataset.met = String(met);
      badge.textContent = `${axis.label} ≥ ${fmt(goal, 0)}: ${met ? "met" : "unmet"} (${fmt(value)})`;
    }
    badges.append(badge);
  });
  container.append(badges);
}
