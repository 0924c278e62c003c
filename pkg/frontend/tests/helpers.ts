/**
 * Test plumbing: golden API payloads captured from a real service run
 * (a reference-table-seeded store plus one fully ingested trip), and a
 * fetch stub that serves them while recording every request.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { vi } from "vitest";

import type {
  ComparisonReport,
  RideDetail,
  RideHeader,
  RideSummary,
  TrendSeries,
} from "../src/api.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

export const ridesFixture = () => load<RideHeader[]>("rides.json");
export const rideRecentFixture = () => load<RideDetail>("ride_recent.json");
export const rideDetailFixture = () => load<RideDetail>("ride_detail.json");
export const comparisonFixture = () => load<ComparisonReport>("comparison_recent.json");
export const trendsFixture = () => load<Record<string, TrendSeries>>("trends.json");

export interface RecordedRequest {
  url: string;
  method: string;
}

/** Stub global fetch with a route table; returns the request log. */
export function stubFetch(routes: Record<string, unknown>): RecordedRequest[] {
  const log: RecordedRequest[] = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      log.push({ url, method: init?.method ?? "GET" });
      const path = url.split("#")[0];
      for (const [route, payload] of Object.entries(routes)) {
        if (path === route) {
          return new Response(JSON.stringify(payload), {
            status: 200,
            headers: { "Content-Type": "application/json" },
          });
        }
      }
      return new Response(JSON.stringify({ error: "RideNotFound", detail: `no route ${url}` }), {
        status: 404,
        headers: { "Content-Type": "application/json" },
      });
    }),
  );
  return log;
}

/** Every number in a JSON payload, as render-rounded strings. */
export function renderedFormsOf(payload: unknown): Set<string> {
  const out = new Set<string>();
  const walk = (node: unknown): void => {
    if (typeof node === "number") {
      out.add(node.toFixed(1));
      out.add(node.toFixed(0));
      return;
    }
    if (Array.isArray(node)) {
      node.forEach(walk);
      return;
    }
    if (node !== null && typeof node === "object") {
      Object.values(node as Record<string, unknown>).forEach(walk);
    }
  };
  walk(payload);
  return out;
}

/** All numeric strings rendered in an element, read leaf by leaf so the
 * text of adjacent cells cannot merge into phantom numbers. */
export function numbersInText(root: HTMLElement): string[] {
  const leaves = [...root.querySelectorAll<HTMLElement>("*")].filter(
    (el) => el.children.length === 0,
  );
  const out: string[] = [];
  for (const el of leaves) {
    for (const match of (el.textContent ?? "").matchAll(/-?\d+(?:\.\d+)?/g)) {
      out.push(match[0]);
    }
  }
  return out;
}

/** The full summary document of an all-OFF drive: every ON slot absent. */
export function allOffSummary(base: RideSummary): RideSummary {
  return {
    ...base,
    acc_on_percent: 0,
    safety_index: { ...base.safety_index, on: null },
    fuel_index: { ...base.fuel_index, on: null },
    fuel_efficiency_kmpl: { ...base.fuel_efficiency_kmpl, on: null },
    comfort_index: { ...base.comfort_index, on: null },
  };
}
