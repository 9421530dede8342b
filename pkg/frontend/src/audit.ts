/** Audit panel state: bounds form, validation, result display, history.
 *
 * Pure state transitions so the contract tests can drive the panel from
 * recorded API responses without a DOM or a live server. The panel never
 * computes objectives itself; every displayed number is lifted verbatim
 * from an AuditResponse.
 */

import type { AuditResponse, Objectives, WireBounds } from "./types.js";
import { BoundsValues, boundsFromWire, boundsToWire, fmt, sameBounds } from "./wire.js";

export interface BoundField {
  value: number; // finite slider/input value, used when inf is off
  inf: boolean;
}

export interface AuditPanelState {
  datasetId: string | null;
  fields: Record<keyof BoundsValues, BoundField>;
  lastResponse: AuditResponse | null;
  lastError: string | null;
  history: HistoryRow[];
  requestSeq: number; // last request issued
  displayedSeq: number; // last response applied
}

export interface HistoryRow {
  bounds: BoundsValues;
  objectives: Objectives;
  peak: number;
}

export const DEFAULT_FIELDS: Record<keyof BoundsValues, BoundField> = {
  w_min: { value: 0, inf: false },
  w_max: { value: 3600, inf: false },
  d_max: { value: 0, inf: false },
  v_avg_max: { value: 60, inf: true },
};

export function initialState(datasetId: string | null = null): AuditPanelState {
  return {
    datasetId,
    fields: structuredClone(DEFAULT_FIELDS),
    lastResponse: null,
    lastError: null,
    history: [],
    requestSeq: 0,
    displayedSeq: 0,
  };
}

export function fieldValue(f: BoundField): number {
  return f.inf ? Infinity : f.value;
}

export function currentBounds(state: AuditPanelState): BoundsValues {
  return {
    w_min: fieldValue(state.fields.w_min),
    w_max: fieldValue(state.fields.w_max),
    d_max: fieldValue(state.fields.d_max),
    v_avg_max: fieldValue(state.fields.v_avg_max),
  };
}

export interface Validation {
  admissible: boolean;
  message: string | null; // inline message when submit is blocked
}

/** Submit is blocked while the waiting window is degenerate. */
export function validate(state: AuditPanelState): Validation {
  const b = currentBounds(state);
  if (!(b.w_max > b.w_min)) {
    return {
      admissible: false,
      message: `w_max (${fmt(b.w_max)}) must exceed w_min (${fmt(b.w_min)})`,
    };
  }
  return { admissible: true, message: null };
}

export function setField(
  state: AuditPanelState,
  name: keyof BoundsValues,
  patch: Partial<BoundField>,
): AuditPanelState {
  return {
    ...state,
    fields: { ...state.fields, [name]: { ...state.fields[name], ...patch } },
  };
}

/** Issue a request: bumps the sequence and returns the wire body. */
export function beginSubmit(state: AuditPanelState): { state: AuditPanelState; body: { bounds: WireBounds }; seq: number } {
  const seq = state.requestSeq + 1;
  return {
    state: { ...state, requestSeq: seq },
    body: { bounds: boundsToWire(currentBounds(state)) },
    seq,
  };
}

/** Apply a response if it is not stale (latest request wins). */
export function applyResponse(state: AuditPanelState, seq: number, resp: AuditResponse): AuditPanelState {
  if (seq <= state.displayedSeq || seq > state.requestSeq) {
    return state; // stale or unknown; drop silently
  }
  const row: HistoryRow = {
    bounds: boundsFromWire(resp.bounds),
    objectives: resp.objectives,
    peak: resp.peak_density,
  };
  return {
    ...state,
    displayedSeq: seq,
    lastResponse: resp,
    lastError: null,
    history: [...state.history, row],
  };
}

/** Surface a 4xx message inline; entered values stay untouched. */
export function applyError(state: AuditPanelState, seq: number, message: string): AuditPanelState {
  if (seq <= state.displayedSeq || seq > state.requestSeq) {
    return state;
  }
  return { ...state, displayedSeq: seq, lastError: message };
}

export interface AuditDisplay {
  fleet: number;
  objectives: { key: keyof Objectives; value: number; text: string }[];
  peak: number;
  lowerBoundNote: string;
  solveMillis: number;
  linkCount: number;
}

/** Everything the result pane shows, verbatim from the service response. */
export function display(resp: AuditResponse): AuditDisplay {
  const keys: (keyof Objectives)[] = ["f1", "f2", "f3", "f4", "f5"];
  return {
    fleet: resp.fleet_size,
    objectives: keys.map((key) => ({ key, value: resp.objectives[key], text: fmt(resp.objectives[key]) })),
    peak: resp.peak_density,
    lowerBoundNote: `any feasible fleet needs ≥ ${resp.peak_density} rakes (peak live services)`,
    solveMillis: resp.solve_millis,
    linkCount: resp.links.length,
  };
}

/** Side-by-side history: one row per audit, newest last. */
export function historyTable(state: AuditPanelState): { bounds: string; cells: string[] }[] {
  return state.history.map((row) => ({
    bounds: describeBounds(row.bounds),
    cells: [
      fmt(row.objectives.f1),
      fmt(row.objectives.f2),
      fmt(row.objectives.f3),
      fmt(row.objectives.f4),
      fmt(row.objectives.f5),
    ],
  }));
}

function describeBounds(b: BoundsValues): string {
  return [fmt(b.w_min), fmt(b.w_max), fmt(b.d_max), fmt(b.v_avg_max)].join(" / ");
}

/** Re-audit straight from a history row (what-if replay). */
export function loadHistoryBounds(state: AuditPanelState, index: number): AuditPanelState {
  const row = state.history[index];
  if (!row) return state;
  const toField = (v: number): BoundField =>
    Number.isFinite(v) ? { value: v, inf: false } : { value: 0, inf: true };
  let next = state;
  for (const name of ["w_min", "w_max", "d_max", "v_avg_max"] as const) {
    next = setField(next, name, toField(row.bounds[name]));
  }
  return next;
}

export function isRepeatOfLast(state: AuditPanelState): boolean {
  const last = state.history[state.history.length - 1];
  return last !== undefined && sameBounds(last.bounds, currentBounds(state));
}
