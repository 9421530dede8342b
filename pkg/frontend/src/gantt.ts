/** Rake-link Gantt layout: one row per rake, service bars on the day axis,
 * deadhead gaps hatched. Pure layout + SVG string generation. */

import type { AuditResponse, ServiceRow } from "./types.js";

export interface GanttBar {
  serviceId: string;
  dep: number;
  arr: number;
  origin: string;
  destination: string;
}

export interface GanttGap {
  from: number; // arr of previous service
  to: number; // dep of next service
  deadhead: boolean; // stations differ: the rake must move empty
}

export interface GanttRow {
  rake: number; // 1-based
  bars: GanttBar[];
  gaps: GanttGap[];
}

export function ganttRows(resp: AuditResponse, services: ServiceRow[]): GanttRow[] {
  const byId = new Map(services.map((s) => [s.service_id, s]));
  return resp.links.map((link, i) => {
    const bars: GanttBar[] = link.map((sid) => {
      const s = byId.get(sid);
      if (!s) throw new Error(`audit link mentions unknown service ${sid}`);
      return { serviceId: sid, dep: s.dep_time, arr: s.arr_time, origin: s.origin, destination: s.destination };
    });
    const gaps: GanttGap[] = [];
    for (let k = 1; k < bars.length; k++) {
      gaps.push({
        from: bars[k - 1].arr,
        to: bars[k].dep,
        deadhead: bars[k - 1].destination !== bars[k].origin,
      });
    }
    return { rake: i + 1, bars, gaps };
  });
}

export interface GanttGeometry {
  width: number;
  rowHeight: number;
  labelWidth: number;
  daySeconds: number;
}

export const DEFAULT_GEOMETRY: GanttGeometry = {
  width: 960,
  rowHeight: 22,
  labelWidth: 64,
  daySeconds: 86400,
};

export function xScale(geom: GanttGeometry): (t: number) => number {
  const span = geom.width - geom.labelWidth;
  return (t) => geom.labelWidth + (t / geom.daySeconds) * span;
}

/** Standalone SVG document for the whole cover. */
export function ganttSvg(rows: GanttRow[], geom: GanttGeometry = DEFAULT_GEOMETRY): string {
  const x = xScale(geom);
  const height = rows.length * geom.rowHeight + 28;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${geom.width} ${height}" class="gantt" role="img">`,
  );
  parts.push(
    `<defs><pattern id="hatch" width="6" height="6" patternTransform="rotate(45)" patternUnits="userSpaceOnUse">` +
      `<line x1="0" y1="0" x2="0" y2="6" stroke="#b5651d" stroke-width="2"/></pattern></defs>`,
  );
  for (let h = 0; h <= 24; h += 3) {
    const px = x(h * 3600);
    parts.push(`<line x1="${px}" y1="14" x2="${px}" y2="${height - 8}" class="gridline"/>`);
    parts.push(`<text x="${px}" y="10" class="axis" text-anchor="middle">${String(h).padStart(2, "0")}h</text>`);
  }
  rows.forEach((row, i) => {
    const top = 18 + i * geom.rowHeight;
    const barH = geom.rowHeight - 8;
    parts.push(`<text x="4" y="${top + barH - 2}" class="rake-label">rake ${row.rake}</text>`);
    for (const gap of row.gaps) {
      if (gap.to > gap.from) {
        const gx = x(gap.from);
        const gw = Math.max(1, x(gap.to) - gx);
        const cls = gap.deadhead ? "gap deadhead" : "gap";
        const fill = gap.deadhead ? ` fill="url(#hatch)"` : "";
        parts.push(
          `<rect x="${gx}" y="${top + 3}" width="${gw}" height="${barH - 6}" class="${cls}"${fill} data-deadhead="${gap.deadhead}"/>`,
        );
      }
    }
    for (const bar of row.bars) {
      const bx = x(bar.dep);
      const bw = Math.max(1.5, x(bar.arr) - bx);
      parts.push(
        `<rect x="${bx}" y="${top}" width="${bw}" height="${barH}" class="service" data-service="${bar.serviceId}">` +
          `<title>${bar.serviceId}: ${bar.origin}→${bar.destination}</title></rect>`,
      );
    }
  });
  parts.push("</svg>");
  return parts.join("");
}
