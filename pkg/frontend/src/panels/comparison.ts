/**
 * The comparison panel: recent ride vs previous vs rolling average, with
 * change-rate rows and direction arrows. Mirrors the CLI table cell for
 * cell — same rows, same 1-decimal display rounding, "—" for absent.
 */

import type { ComparisonReport, RideSummary } from "../api.js";
import { arrow, fmt, fmtSigned } from "../format.js";
import { htmlEl } from "../svg.js";

type TripleField = "safety_index" | "fuel_index" | "fuel_efficiency_kmpl" | "comfort_index";

const GROUPS: { field: TripleField; label: string }[] = [
  { field: "safety_index", label: "Safety Index (%)" },
  { field: "fuel_index", label: "Fuel Effic. Index (%)" },
  { field: "fuel_efficiency_kmpl", label: "Fuel Effic. (km/L)" },
  { field: "comfort_index", label: "Comfort Index (%)" },
];
const SLOTS = ["on", "off", "all"] as const;

function summaryCells(summary: RideSummary | null): (number | null)[] {
  const cells: (number | null)[] = [];
  for (const group of GROUPS) {
    const triple = summary === null ? null : summary[group.field];
    for (const slot of SLOTS) {
      cells.push(triple === null ? null : triple[slot]);
    }
  }
  cells.push(summary === null ? null : summary.acc_on_percent);
  return cells;
}

function changeCells(changes: Record<string, number | null>): (number | null)[] {
  const cells: (number | null)[] = [];
  for (const group of GROUPS) {
    for (const slot of SLOTS) {
      cells.push(changes[`${group.field}.${slot}`] ?? null);
    }
  }
  cells.push(changes["acc_on_percent"] ?? null);
  return cells;
}

export function renderComparison(container: HTMLElement, report: ComparisonReport): void {
  container.replaceChildren();
  const table = htmlEl("table", "comparison-table");

  const groupRow = htmlEl("tr");
  groupRow.append(htmlEl("th"));
  for (const group of GROUPS) {
    const th = htmlEl("th", "group-head", group.label);
    th.colSpan = SLOTS.length;
    groupRow.append(th);
  }
  groupRow.append(htmlEl("th", "group-head", "ACC ON %"));
  const slotRow = htmlEl("tr");
  slotRow.append(htmlEl("th"));
  for (let g = 0; g < GROUPS.length; g++) {
    for (const slot of SLOTS) slotRow.append(htmlEl("th", "slot-head", slot.toUpperCase()));
  }
  slotRow.append(htmlEl("th"));
  const head = htmlEl("thead");
  head.append(groupRow, slotRow);
  table.append(head);

  const metricKeys = GROUPS.flatMap((g) => SLOTS.map((s) => `${g.field}.${s}`)).concat(["acc_on_percent"]);

  const body = htmlEl("tbody");
  const addRow = (
    label: string,
    cells: (number | null)[],
    kind: "value" | "change",
  ) => {
    const row = htmlEl("tr", kind === "change" ? "change-row" : "value-row");
    row.append(htmlEl("th", "row-label", label));
    cells.forEach((value, i) => {
      const cell = htmlEl("td", value === null ? "cell-absent" : "cell");
      cell.dataset.metric = metricKeys[i];
      if (kind === "change") {
        cell.textContent = value === null ? fmt(null) : `${arrow(value)} ${fmtSigned(value)}`;
        if (value !== null) cell.dataset.change = fmt(value);
      } else {
        cell.textContent = fmt(value);
      }
      row.append(cell);
    });
    body.append(row);
  };

  addRow(`Avg. of nearest ${report.window} rides`, summaryCells(report.rolling_avg), "value");
  addRow("Previous ride", summaryCells(report.previous), "value");
  addRow("Recent ride", summaryCells(report.recent), "value");
  addRow("Change rate (to avg.)", changeCells(report.change_to_avg), "change");
  addRow("Change rate (to prev.)", changeCells(report.change_to_prev), "change");
  table.append(body);

  container.append(table);
}
