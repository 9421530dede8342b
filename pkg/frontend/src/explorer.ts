/** Sweep explorer: front-colored objective scatter with click-through to
 * the underlying decision bounds, per-front minima table, cluster list.
 * Layout and hit-testing are pure so the contract tests can replay
 * recorded sweeps. */

import type {
  ClustersResponse,
  FrontsResponse,
  MinimaResponse,
  ObjectiveKey,
  RecordsPage,
  SweepRecordRow,
} from "./types.js";
import { OBJECTIVE_KEYS } from "./types.js";
import { fmt, fromWire } from "./wire.js";

export const FRONT_PALETTE = [
  "#1b6ca8", "#d1495b", "#2e933c", "#e08d18", "#7b5ea7",
  "#0f8b8d", "#a23e48", "#6b7d2a", "#b0578d", "#5c5d8d",
];

export function frontColor(front: number): string {
  return FRONT_PALETTE[(front - 1) % FRONT_PALETTE.length];
}

export interface ScatterPoint {
  index: number; // record index within the sweep
  x: number; // pixel position
  y: number;
  vx: number; // objective values behind the position
  vy: number;
  front: number;
  color: string;
}

export interface ScatterLayout {
  points: ScatterPoint[];
  xKey: ObjectiveKey;
  yKey: ObjectiveKey;
  width: number;
  height: number;
  pad: number;
  xRange: [number, number];
  yRange: [number, number];
}

export function frontOf(fronts: FrontsResponse): Map<number, number> {
  const map = new Map<number, number>();
  for (const f of fronts.fronts) {
    for (const idx of f.records) map.set(idx, f.front);
  }
  return map;
}

export function scatterLayout(
  page: RecordsPage,
  fronts: FrontsResponse,
  xKey: ObjectiveKey,
  yKey: ObjectiveKey,
  width = 720,
  height = 480,
  pad = 36,
): ScatterLayout {
  const byFront = frontOf(fronts);
  const rows = page.records.filter((r): r is Required<SweepRecordRow> => r.objectives !== undefined);
  const xs = rows.map((r) => r.objectives[xKey]);
  const ys = rows.map((r) => r.objectives[yKey]);
  const xRange = extent(xs);
  const yRange = extent(ys);
  const sx = scale(xRange, [pad, width - pad]);
  const sy = scale(yRange, [height - pad, pad]); // y grows downward in SVG
  const points = rows
    .filter((r) => byFront.has(r.index))
    .map((r) => ({
      index: r.index,
      x: sx(r.objectives[xKey]),
      y: sy(r.objectives[yKey]),
      vx: r.objectives[xKey],
      vy: r.objectives[yKey],
      front: byFront.get(r.index)!,
      color: frontColor(byFront.get(r.index)!),
    }));
  return { points, xKey, yKey, width, height, pad, xRange, yRange };
}

function extent(values: number[]): [number, number] {
  if (values.length === 0) return [0, 1];
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function scale(domain: [number, number], range: [number, number]): (v: number) => number {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  return (v) => r0 + ((v - d0) / (d1 - d0)) * (r1 - r0);
}

/** Nearest point within `radius` pixels of the click, or null. */
export function hitTest(layout: ScatterLayout, px: number, py: number, radius = 8): ScatterPoint | null {
  let best: ScatterPoint | null = null;
  let bestD = radius * radius;
  for (const p of layout.points) {
    const d = (p.x - px) ** 2 + (p.y - py) ** 2;
    if (d <= bestD) {
      best = p;
      bestD = d;
    }
  }
  return best;
}

export interface SelectionDetail {
  index: number;
  bounds: Record<"w_min" | "w_max" | "d_max" | "v_avg_max", string>;
  objectives: Record<ObjectiveKey, string>;
  front: number;
  cluster: { id: number; size: number } | null;
}

/** What the side panel shows after a point click: the record's decision
 * bounds verbatim, its objectives, and its cluster membership. */
export function selectionDetail(
  page: RecordsPage,
  fronts: FrontsResponse,
  clusters: ClustersResponse | null,
  index: number,
): SelectionDetail | null {
  const rec = page.records.find((r) => r.index === index);
  if (!rec || !rec.objectives) return null;
  const front = frontOf(fronts).get(index) ?? 0;
  let cluster: SelectionDetail["cluster"] = null;
  if (clusters) {
    for (const c of clusters.clusters) {
      if (c.records.includes(index)) {
        cluster = { id: c.cluster_id, size: c.records.length };
        break;
      }
    }
  }
  return {
    index,
    bounds: {
      w_min: fmt(fromWire(rec.bounds.w_min)),
      w_max: fmt(fromWire(rec.bounds.w_max)),
      d_max: fmt(fromWire(rec.bounds.d_max)),
      v_avg_max: fmt(fromWire(rec.bounds.v_avg_max)),
    },
    objectives: Object.fromEntries(OBJECTIVE_KEYS.map((k) => [k, fmt(rec.objectives![k])])) as Record<
      ObjectiveKey,
      string
    >,
    front,
    cluster,
  };
}

export function scatterSvg(layout: ScatterLayout): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${layout.width} ${layout.height}" class="scatter" role="img">`,
  );
  parts.push(
    `<text x="${layout.width / 2}" y="${layout.height - 6}" text-anchor="middle" class="axis">${layout.xKey}</text>`,
  );
  parts.push(
    `<text x="12" y="${layout.height / 2}" text-anchor="middle" class="axis" transform="rotate(-90 12 ${layout.height / 2})">${layout.yKey}</text>`,
  );
  for (const p of layout.points) {
    parts.push(
      `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="4" fill="${p.color}" data-index="${p.index}" data-front="${p.front}"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

/** Minima table rows straight off the wire, one per queried front. */
export function minimaRows(responses: MinimaResponse[]): { front: number; cells: string[] }[] {
  return responses.map((r) => ({
    front: r.front,
    cells: OBJECTIVE_KEYS.map((k) => fmt(fromWire(r.minima[k]))),
  }));
}

export interface ClusterRow {
  front: number;
  clusterId: number;
  size: number;
  representative: string;
  records: number[];
}

export function clusterRows(resp: ClustersResponse): ClusterRow[] {
  return resp.clusters.map((c) => ({
    front: c.front,
    clusterId: c.cluster_id,
    size: c.records.length,
    representative: OBJECTIVE_KEYS.map((k) => fmt(fromWire(c.representative[k]))).join(" / "),
    records: c.records,
  }));
}
