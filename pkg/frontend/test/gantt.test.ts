import { describe, expect, it } from "vitest";

import { DEFAULT_GEOMETRY, ganttRows, ganttSvg, xScale } from "../src/gantt.js";
import type { AuditResponse, DatasetDetail } from "../src/types.js";
import { fixture } from "./helpers.js";

const auditRef = fixture<AuditResponse>("audit_reference.json");
const datasetRef = fixture<DatasetDetail>("dataset_reference.json");
const auditDemo = fixture<AuditResponse>("audit_demo_tight.json");
const datasetDemo = fixture<DatasetDetail>("dataset_demo.json");

describe("gantt rows from a recorded audit", () => {
  it("one row per rake-link, bars in link order with service times", () => {
    const rows = ganttRows(auditRef, datasetRef.services);
    expect(rows).toHaveLength(auditRef.fleet_size);
    const byId = new Map(datasetRef.services.map((s) => [s.service_id, s]));
    rows.forEach((row, i) => {
      expect(row.rake).toBe(i + 1);
      expect(row.bars.map((b) => b.serviceId)).toEqual(auditRef.links[i]);
      for (const bar of row.bars) {
        expect(bar.dep).toBe(byId.get(bar.serviceId)!.dep_time);
        expect(bar.arr).toBe(byId.get(bar.serviceId)!.arr_time);
      }
    });
  });

  it("covers every service exactly once across rows", () => {
    const rows = ganttRows(auditDemo, datasetDemo.services);
    const seen = rows.flatMap((r) => r.bars.map((b) => b.serviceId)).sort();
    const all = datasetDemo.services.map((s) => s.service_id).sort();
    expect(seen).toEqual(all);
  });

  it("marks gaps as deadhead exactly when stations differ", () => {
    const rows = ganttRows(auditDemo, datasetDemo.services);
    const byId = new Map(datasetDemo.services.map((s) => [s.service_id, s]));
    for (const row of rows) {
      row.gaps.forEach((gap, k) => {
        const prev = byId.get(row.bars[k].serviceId)!;
        const next = byId.get(row.bars[k + 1].serviceId)!;
        expect(gap.deadhead).toBe(prev.destination !== next.origin);
        expect(gap.from).toBe(prev.arr_time);
        expect(gap.to).toBe(next.dep_time);
        expect(gap.to).toBeGreaterThanOrEqual(gap.from); // chronological links
      });
    }
  });

  it("rejects links that mention services missing from the dataset", () => {
    expect(() => ganttRows(auditRef, datasetDemo.services)).toThrow(/unknown service/);
  });
});

describe("gantt svg", () => {
  it("draws service bars positioned on the day axis", () => {
    const rows = ganttRows(auditRef, datasetRef.services);
    const svg = ganttSvg(rows);
    expect(svg.match(/class="service"/g)).toHaveLength(datasetRef.services.length);
    const x = xScale(DEFAULT_GEOMETRY);
    const firstDep = rows[0].bars[0].dep;
    expect(svg).toContain(`x="${x(firstDep)}"`);
  });

  it("hatches deadhead gaps", () => {
    // the relaxed-bounds cover chains across stations, so it must show
    // hatched empty moves (the tight one stays station-local)
    const auditRelaxed = fixture<AuditResponse>("audit_demo_relaxed.json");
    const rows = ganttRows(auditRelaxed, datasetDemo.services);
    const svg = ganttSvg(rows);
    const hasDeadhead = rows.some((r) => r.gaps.some((g) => g.deadhead && g.to > g.from));
    expect(hasDeadhead).toBe(true);
    expect(svg).toContain('fill="url(#hatch)"');
    expect(svg).toContain('data-deadhead="true"');
  });

  it("keeps plain waiting gaps unhatched", () => {
    const rows = ganttRows(auditRef, datasetRef.services);
    const svg = ganttSvg(rows);
    expect(svg).toContain('data-deadhead="false"');
    // all-same-hub reference cover never needs an empty move
    expect(svg).not.toContain('data-deadhead="true"');
  });
});
