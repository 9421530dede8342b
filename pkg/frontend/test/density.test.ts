import { describe, expect, it } from "vitest";

import { densityLayout, densitySvg } from "../src/density.js";
import type { DensityResponse } from "../src/types.js";
import { fixture } from "./helpers.js";

const density = fixture<DensityResponse>("density_demo.json");

describe("density chart from the recorded profile", () => {
  it("annotates the exact peak returned by the service", () => {
    const layout = densityLayout(density);
    expect(layout.peak).toBe(density.peak);
    expect(layout.peak).toBe(Math.max(...density.counts));
    expect(density.counts[layout.peakSecond]).toBe(density.peak);
    const svg = densitySvg(layout);
    expect(svg).toContain(`peak ${density.peak}`);
  });

  it("downsampled path keeps the peak visible (bucket maxima)", () => {
    const layout = densityLayout(density, 960, 220, 720);
    const ys = layout.path.split(" ").map((pt) => Number(pt.split(",")[1]));
    expect(Math.min(...ys)).toBeCloseTo(layout.peakY, 0);
  });

  it("single-service pulse renders a unit rectangle", () => {
    const counts = new Array(86400).fill(0);
    for (let t = 600; t < 1800; t++) counts[t] = 1;
    const layout = densityLayout({ dataset_id: "x", peak: 1, counts }, 960, 220, 480);
    expect(layout.peak).toBe(1);
    expect(layout.peakSecond).toBe(600);
    const ys = layout.path.split(" ").map((pt) => Number(pt.split(",")[1]));
    expect(new Set(ys).size).toBe(2); // baseline and the pulse level
  });

  it("labels the day axis in six-hour steps", () => {
    const svg = densitySvg(densityLayout(density));
    for (const label of ["00:00", "06:00", "12:00", "18:00", "24:00"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
  });

  it("two rush-hour bumps are visible in the demo profile", () => {
    const window = (h0: number, h1: number) => Math.max(...density.counts.slice(h0 * 3600, h1 * 3600));
    const morning = window(6, 11);
    const midday = window(12, 15);
    const evening = window(16, 21);
    expect(morning).toBeGreaterThan(midday);
    expect(evening).toBeGreaterThan(midday);
  });
});
