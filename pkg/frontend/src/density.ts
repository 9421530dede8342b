/** Density profile chart: live-service counts over the day with the peak
 * annotated. The peak doubles as the fleet lower bound on the audit panel. */

import type { DensityResponse } from "./types.js";
import { fmtClock } from "./wire.js";

export interface DensityLayout {
  path: string; // SVG polyline points, downsampled to one vertex per bucket
  peak: number;
  peakSecond: number;
  peakX: number;
  peakY: number;
  width: number;
  height: number;
}

export function densityLayout(resp: DensityResponse, width = 960, height = 220, buckets = 720): DensityLayout {
  const counts = resp.counts;
  const pad = 20;
  const innerW = width - 2 * pad;
  const innerH = height - 2 * pad;
  const peak = resp.peak;
  const yOf = (c: number) => height - pad - (peak > 0 ? (c / peak) * innerH : 0);
  const step = Math.max(1, Math.floor(counts.length / buckets));
  const pts: string[] = [];
  for (let t = 0; t < counts.length; t += step) {
    // drawing the bucket maximum keeps narrow spikes visible after downsampling
    let m = 0;
    for (let k = t; k < Math.min(t + step, counts.length); k++) m = Math.max(m, counts[k]);
    const x = pad + (t / counts.length) * innerW;
    pts.push(`${x.toFixed(1)},${yOf(m).toFixed(1)}`);
  }
  const peakSecond = counts.indexOf(peak);
  return {
    path: pts.join(" "),
    peak,
    peakSecond,
    peakX: pad + (Math.max(peakSecond, 0) / counts.length) * innerW,
    peakY: yOf(peak),
    width,
    height,
  };
}

export function densitySvg(layout: DensityLayout): string {
  const pad = 20;
  const innerW = layout.width - 2 * pad;
  const ticks: string[] = [];
  for (let h = 0; h <= 24; h += 6) {
    const x = pad + (h / 24) * innerW;
    ticks.push(
      `<line x1="${x}" y1="${pad}" x2="${x}" y2="${layout.height - pad}" class="gridline"/>` +
        `<text x="${x}" y="${layout.height - 4}" class="axis" text-anchor="middle">${fmtClock(h * 3600)}</text>`,
    );
  }
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${layout.width} ${layout.height}" class="density" role="img">` +
    ticks.join("") +
    `<polyline points="${layout.path}" fill="none" class="profile"/>` +
    `<circle cx="${layout.peakX.toFixed(1)}" cy="${layout.peakY.toFixed(1)}" r="4" class="peak-dot"/>` +
    `<text x="${layout.peakX.toFixed(1)}" y="${Math.max(12, layout.peakY - 8).toFixed(1)}" class="peak-label" text-anchor="middle">peak ${layout.peak}</text>` +
    `</svg>`
  );
}
