/**
 * Client-side view state: ride selection, comparison window, overlay
 * toggles and per-index goals. Goals live only on this side of the API,
 * persisted through a small storage abstraction (localStorage in the
 * browser, anything map-like in tests).
 */

import type { RideHeader } from "./api.js";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export interface Goals {
  safety?: number;
  fuel?: number;
  comfort?: number;
}

export interface OverlayToggles {
  on: boolean;
  off: boolean;
  all: boolean;
}

const GOALS_KEY = "drivefit.goals";

export class ViewState {
  rides: RideHeader[] = [];
  selectedRide: string | null = null;
  comparisonWindow = 5;
  overlays: OverlayToggles = { on: true, off: true, all: true };

  constructor(private storage: KeyValueStore) {}

  /** Keep the invariant: the selected ride always exists in the list. */
  setRides(rides: RideHeader[]): void {
    this.rides = rides;
    const ids = rides.map((r) => r.ride_id);
    if (this.selectedRide === null || !ids.includes(this.selectedRide)) {
      this.selectedRide = ids.length ? ids[ids.length - 1] : null; // newest ride
    }
  }

  selectRide(rideId: string): void {
    if (!this.rides.some((r) => r.ride_id === rideId)) {
      throw new Error(`ride ${rideId} is not in the fetched ride list`);
    }
    this.selectedRide = rideId;
  }

  setComparisonWindow(n: number): void {
    this.comparisonWindow = Math.max(1, Math.floor(n) || 1);
  }

  toggleOverlay(slot: keyof OverlayToggles): void {
    this.overlays[slot] = !this.overlays[slot];
  }

  goals(): Goals {
    const raw = this.storage.getItem(GOALS_KEY);
    if (!raw) return {};
    try {
      return JSON.parse(raw) as Goals;
    } catch {
      return {};
    }
  }

  setGoals(goals: Goals): void {
    this.storage.setItem(GOALS_KEY, JSON.stringify(goals));
  }
}
