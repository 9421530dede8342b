/** Encoding and display helpers for the "inf"-string wire convention. */

import type { WireBounds, WireNumber } from "./types.js";

export const INF_GLYPH = "∞";

export function fromWire(v: WireNumber): number {
  return v === "inf" ? Infinity : v;
}

export function toWire(v: number): WireNumber {
  return Number.isFinite(v) ? v : "inf";
}

export interface BoundsValues {
  w_min: number;
  w_max: number;
  d_max: number;
  v_avg_max: number;
}

export function boundsFromWire(b: WireBounds): BoundsValues {
  return {
    w_min: fromWire(b.w_min),
    w_max: fromWire(b.w_max),
    d_max: fromWire(b.d_max),
    v_avg_max: fromWire(b.v_avg_max),
  };
}

export function boundsToWire(b: BoundsValues): WireBounds {
  return {
    w_min: toWire(b.w_min),
    w_max: toWire(b.w_max),
    d_max: toWire(b.d_max),
    v_avg_max: toWire(b.v_avg_max),
  };
}

/** Render a quantity for planners: the inf glyph, or a trimmed decimal. */
export function fmt(v: number, digits = 3): string {
  if (!Number.isFinite(v)) return INF_GLYPH;
  if (Number.isInteger(v)) return String(v);
  return v.toFixed(digits).replace(/0+$/, "").replace(/\.$/, "");
}

export function fmtBounds(b: BoundsValues): string {
  return `w∈[${fmt(b.w_min)}, ${fmt(b.w_max)}]s d≤${fmt(b.d_max)}km v≤${fmt(b.v_avg_max)}km/h`;
}

/** Seconds since midnight as HH:MM. */
export function fmtClock(seconds: number): string {
  const h = Math.floor(seconds / 3600);
  const m = Math.floor((seconds % 3600) / 60);
  return `${String(h).padStart(2, "0")}:${String(m).padStart(2, "0")}`;
}

export function sameBounds(a: BoundsValues, b: BoundsValues): boolean {
  return (
    a.w_min === b.w_min && a.w_max === b.w_max && a.d_max === b.d_max && a.v_avg_max === b.v_avg_max
  );
}
