/**
 * Display-only formatting. The dashboard never does metric arithmetic:
 * every number on screen is an API value passed through these helpers.
 */

export const ABSENT = "—";

/** One-decimal display rounding; absent values render as a gap, never 0. */
export function fmt(value: number | null | undefined, decimals = 1): string {
  if (value === null || value === undefined) {
    return ABSENT;
  }
  return value.toFixed(decimals);
}

export function fmtSigned(value: number | null | undefined, decimals = 1): string {
  if (value === null || value === undefined) {
    return ABSENT;
  }
  const text = value.toFixed(decimals);
  return value > 0 ? `+${text}` : text;
}

/** Direction marker for a change-rate cell. */
export function arrow(value: number | null | undefined): string {
  if (value === null || value === undefined) {
    return "";
  }
  if (value > 0) return "▲";
  if (value < 0) return "▼";
  return "·";
}

export function shortDate(startedAt: string): string {
  return startedAt.slice(0, 10);
}
