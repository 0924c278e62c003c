/**
 * Typed client for the drivefit HTTP API (see docs/api.md in the repo root).
 *
 * The dashboard is read-only: every method is a GET. All numbers come back
 * at full precision; rounding happens at render time only.
 */

export interface MetricTriple {
  on: number | null;
  off: number | null;
  all: number | null;
}

export interface RideSummary {
  schema_version: number;
  ride_id: string;
  started_at: string | null;
  duration_s: number;
  distance_km: number;
  mean_speed_kph: number;
  acc_on_percent: number;
  safety_index: MetricTriple;
  fuel_index: MetricTriple;
  fuel_efficiency_kmpl: MetricTriple;
  comfort_index: MetricTriple;
}

export interface RideHeader {
  ride_id: string;
  started_at: string;
  duration_s: number;
  distance_km: number;
  acc_on_percent: number;
  safety_index_all: number | null;
  fuel_index_all: number | null;
  fuel_efficiency_kmpl_all: number | null;
  comfort_index_all: number | null;
}

/** Diagnostic samples: null = absent, "inf"/"-inf" = non-finite. */
export type SeriesValue = number | "inf" | "-inf" | null;

export interface Diagnostics {
  t: number[];
  speed: number[];
  accel: number[];
  jerk: number[];
  cruise_on: boolean[];
  lead_distance: SeriesValue[];
  headway: SeriesValue[];
  ttc: SeriesValue[];
  zone: (string | null)[];
  fcr: number[];
  violation: boolean[];
  distance_km: number[];
}

export interface RideDetail {
  summary: RideSummary;
  diagnostics: Diagnostics | null;
  diagnostics_stride?: number;
  diagnostics_total_samples?: number;
}

export interface ComparisonReport {
  recent: RideSummary;
  previous: RideSummary | null;
  rolling_avg: RideSummary | null;
  window: number;
  change_to_avg: Record<string, number | null>;
  change_to_prev: Record<string, number | null>;
}

export interface TrendPoint {
  ordinal: number;
  started_at: string;
  value: number | null;
}

export interface TrendSeries {
  metric: string;
  points: TrendPoint[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`API ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        detail = body.detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return response.json() as Promise<T>;
  }

  listRides(): Promise<RideHeader[]> {
    return this.get("/rides");
  }

  rideDetail(rideId: string): Promise<RideDetail> {
    return this.get(`/rides/${encodeURIComponent(rideId)}`);
  }

  comparison(rideId: string, window: number): Promise<ComparisonReport> {
    return this.get(`/rides/${encodeURIComponent(rideId)}/comparison?window=${window}`);
  }

  trend(metric: string): Promise<TrendSeries> {
    return this.get(`/trends?metric=${encodeURIComponent(metric)}`);
  }
}
