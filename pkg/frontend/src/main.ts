/**
 * Dashboard wiring: fetch -> state -> panels.
 *
 * Strictly read-only against the API; overlay toggles, goal edits and
 * window changes only refetch GETs or re-render. Each panel keeps its last
 * good payload and shows a stale-data banner if a refetch fails.
 */

import { ApiClient } from "./api.js";
import type { ComparisonReport, RideDetail, TrendSeries } from "./api.js";
import { ViewState } from "./state.js";
import { renderKpiPanel } from "./panels/kpi.js";
import { renderRideDetail } from "./panels/detail.js";
import { renderComparison } from "./panels/comparison.js";
import { renderTrends, TREND_METRICS } from "./panels/trends.js";

interface PanelCache {
  detail?: RideDetail;
  comparison?: ComparisonReport;
  trends?: TrendSeries[];
}

export function bootstrap(root: Document, api: ApiClient, state: ViewState): { refresh: () => Promise<void> } {
  const el = (id: string) => {
    const node = root.getElementById(id);
    if (!node) throw new Error(`missing #${id} container`);
    return node as HTMLElement;
  };
  const rideSelect = el("ride-select") as unknown as HTMLSelectElement;
  const windowInput = el("window-input") as unknown as HTMLInputElement;
  const banner = el("banner");
  const cache: PanelCache = {};

  function showBanner(message: string): void {
    banner.textContent = message;
    banner.classList.remove("hidden");
  }

  function hideBanner(): void {
    banner.textContent = "";
    banner.classList.add("hidden");
  }

  async function refreshRidePanels(): Promise<void> {
    if (state.selectedRide === null) return;
    try {
      cache.detail = await api.rideDetail(state.selectedRide);
      cache.comparison = await api.comparison(state.selectedRide, state.comparisonWindow);
      hideBanner();
    } catch (err) {
      showBanner(`API unreachable (${String(err)}); showing last good data`);
    }
    if (cache.detail) {
      renderKpiPanel(el("kpi-panel"), cache.detail.summary, state.goals(), state.overlays);
      renderRideDetail(el("detail-panel"), cache.detail);
    }
    if (cache.comparison) {
      renderComparison(el("comparison-panel"), cache.comparison);
    }
  }

  async function refreshTrends(): Promise<void> {
    try {
      cache.trends = await Promise.all(TREND_METRICS.map((m) => api.trend(m)));
      hideBanner();
    } catch (err) {
      showBanner(`API unreachable (${String(err)}); showing last good data`);
    }
    if (cache.trends) {
      renderTrends(el("trends-panel"), cache.trends);
    }
  }

  async function refresh(): Promise<void> {
    try {
      state.setRides(await api.listRides());
    } catch (err) {
      showBanner(`API unreachable (${String(err)}); showing last good data`);
      return;
    }
    rideSelect.replaceChildren();
    for (const ride of state.rides) {
      const option = root.createElement("option");
      option.value = ride.ride_id;
      option.textContent = `${ride.ride_id} (${ride.started_at.slice(0, 10)})`;
      option.selected = ride.ride_id === state.selectedRide;
      rideSelect.append(option);
    }
    await refreshRidePanels();
    await refreshTrends();
  }

  rideSelect.addEventListener("change", () => {
    state.selectRide(rideSelect.value);
    void refreshRidePanels();
  });
  windowInput.addEventListener("change", () => {
    state.setComparisonWindow(Number(windowInput.value));
    windowInput.value = String(state.comparisonWindow);
    void refreshRidePanels(); // changing N refetches the comparison
  });
  for (const slot of ["on", "off", "all"] as const) {
    const box = el(`overlay-${slot}`) as unknown as HTMLInputElement;
    box.checked = state.overlays[slot];
    box.addEventListener("change", () => {
      state.toggleOverlay(slot);
      if (cache.detail) {
        renderKpiPanel(el("kpi-panel"), cache.detail.summary, state.goals(), state.overlays);
      }
    });
  }
  el("goal-save").addEventListener("click", () => {
    const read = (id: string) => {
      const raw = (el(id) as unknown as HTMLInputElement).value;
      return raw === "" ? undefined : Number(raw);
    };
    state.setGoals({ safety: read("goal-safety"), fuel: read("goal-fuel"), comfort: read("goal-comfort") });
    if (cache.detail) {
      renderKpiPanel(el("kpi-panel"), cache.detail.summary, state.goals(), state.overlays);
    }
  });

  return { refresh };
}

declare global {
  interface Window {
    DRIVEFIT_API_BASE?: string;
  }
}

// browser entry point; tests import bootstrap() directly instead
if (typeof window !== "undefined" && typeof document !== "undefined" && document.getElementById("ride-select")) {
  const api = new ApiClient(window.DRIVEFIT_API_BASE ?? "");
  const state = new ViewState(window.localStorage);
  void bootstrap(document, api, state).refresh();
}
