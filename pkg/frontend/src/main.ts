/** DOM wiring for the planner console. State that survives a reload is the
 * dataset/sweep id pair in the URL hash; everything else is fetched fresh. */

import { Api, ApiError } from "./api.js";
import {
  AuditPanelState,
  applyError,
  applyResponse,
  beginSubmit,
  display,
  historyTable,
  initialState,
  loadHistoryBounds,
  setField,
  validate,
} from "./audit.js";
import { densityLayout, densitySvg } from "./density.js";
import {
  clusterRows,
  frontColor,
  hitTest,
  minimaRows,
  scatterLayout,
  scatterSvg,
  selectionDetail,
} from "./explorer.js";
import { ganttRows, ganttSvg } from "./gantt.js";
import type { ClustersResponse, DatasetDetail, FrontsResponse, ObjectiveKey, RecordsPage } from "./types.js";
import { OBJECTIVE_KEYS } from "./types.js";
import { INF_GLYPH, fmt } from "./wire.js";

const api = new Api("");

interface UrlState {
  dataset?: string;
  sweep?: string;
}

function readHash(): UrlState {
  const params = new URLSearchParams(window.location.hash.slice(1));
  return { dataset: params.get("dataset") ?? undefined, sweep: params.get("sweep") ?? undefined };
}

function writeHash(state: UrlState): void {
  const params = new URLSearchParams();
  if (state.dataset) params.set("dataset", state.dataset);
  if (state.sweep) params.set("sweep", state.sweep);
  window.location.hash = params.toString();
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

let panel: AuditPanelState = initialState();
let dataset: DatasetDetail | null = null;
let sweepPage: RecordsPage | null = null;
let sweepFronts: FrontsResponse | null = null;
let sweepClusters: ClustersResponse | null = null;
let xKey: ObjectiveKey = "f1";
let yKey: ObjectiveKey = "f2";

const FIELDS = ["w_min", "w_max", "d_max", "v_avg_max"] as const;

function renderBoundsForm(): void {
  const validation = validate(panel);
  for (const name of FIELDS) {
    const field = panel.fields[name];
    el<HTMLInputElement>(`in-${name}`).value = String(field.value);
    el<HTMLInputElement>(`in-${name}`).disabled = field.inf;
    el<HTMLInputElement>(`inf-${name}`).checked = field.inf;
  }
  const msg = el("bounds-message");
  msg.textContent = validation.message ?? "";
  msg.classList.toggle("violation", !validation.admissible);
  el<HTMLButtonElement>("btn-audit").disabled = !validation.admissible || !panel.datasetId;
  el("w-window").classList.toggle("violation", !validation.admissible);
}

function renderResult(): void {
  const out = el("audit-result");
  const err = el("audit-error");
  err.textContent = panel.lastError ?? "";
  if (!panel.lastResponse) {
    out.innerHTML = "<p class='hint'>upload a dataset and run an audit</p>";
    return;
  }
  const d = display(panel.lastResponse);
  const cells = d.objectives
    .map((o) => `<div class="stat"><span class="stat-label">${o.key}</span><span class="stat-value">${o.text}</span></div>`)
    .join("");
  out.innerHTML =
    `<div class="stat fleet"><span class="stat-label">fleet</span><span class="stat-value">${d.fleet}</span></div>` +
    cells +
    `<div class="stat"><span class="stat-label">peak</span><span class="stat-value">${d.peak}</span></div>` +
    `<p class="hint">${d.lowerBoundNote}; solved in ${fmt(d.solveMillis)} ms</p>`;
  if (dataset) {
    el("gantt-holder").innerHTML = ganttSvg(ganttRows(panel.lastResponse, dataset.services));
  }
  const hist = historyTable(panel);
  el("history-body").innerHTML = hist
    .map((row, i) => `<tr data-row="${i}"><td>${row.bounds}</td>${row.cells.map((c) => `<td>${c}</td>`).join("")}</tr>`)
    .join("");
}

async function runAudit(): Promise<void> {
  const datasetId = panel.datasetId;
  if (!datasetId) return;
  const { state, body, seq } = beginSubmit(panel);
  panel = state;
  try {
    const resp = await api.audit(datasetId, body.bounds);
    panel = applyResponse(panel, seq, resp);
  } catch (e) {
    panel = applyError(panel, seq, e instanceof ApiError ? e.message : String(e));
  }
  renderBoundsForm();
  renderResult();
}

async function loadDataset(id: string): Promise<void> {
  dataset = await api.dataset(id);
  panel = { ...initialState(id), history: [] };
  el("dataset-label").textContent = `${id} · ${dataset.service_count} services · ${dataset.stations.length} stations`;
  const density = await api.density(id);
  el("density-holder").innerHTML = densitySvg(densityLayout(density));
  el("peak-label").textContent = `peak live services: ${density.peak}`;
  writeHash({ ...readHash(), dataset: id });
  renderBoundsForm();
  renderResult();
}

async function loadSweep(id: string): Promise<void> {
  const status = await api.sweepStatus(id);
  el("sweep-label").textContent = `${id} · ${status.status} ${status.completed}/${status.total}`;
  if (status.status !== "done") {
    if (status.status === "failed") return;
    setTimeout(() => void loadSweep(id), 600);
    return;
  }
  [sweepPage, sweepFronts, sweepClusters] = await Promise.all([
    api.records(id),
    api.fronts(id),
    api.clusters(id, el<HTMLInputElement>("in-eps").value || "0"),
  ]);
  writeHash({ ...readHash(), sweep: id });
  renderExplorer();
}

function renderExplorer(): void {
  if (!sweepPage || !sweepFronts) return;
  const layout = scatterLayout(sweepPage, sweepFronts, xKey, yKey);
  el("scatter-holder").innerHTML = scatterSvg(layout);
  const svg = el("scatter-holder").querySelector("svg")!;
  svg.addEventListener("click", (ev) => {
    const rect = svg.getBoundingClientRect();
    const px = ((ev.clientX - rect.left) / rect.width) * layout.width;
    const py = ((ev.clientY - rect.top) / rect.height) * layout.height;
    const hit = hitTest(layout, px, py, 10);
    renderSelection(hit ? hit.index : null);
  });
  const frontsSeen = [...new Set(layout.points.map((p) => p.front))].sort((a, b) => a - b);
  el("legend").innerHTML = frontsSeen
    .map((f) => `<span class="legend-item"><span class="swatch" style="background:${frontColor(f)}"></span>front ${f}</span>`)
    .join(" ");
  if (sweepClusters) {
    el("clusters-body").innerHTML = clusterRows(sweepClusters)
      .map((c) => `<tr><td>${c.front}</td><td>${c.clusterId}</td><td>${c.size}</td><td>${c.representative}</td></tr>`)
      .join("");
  }
  void renderMinima();
}

async function renderMinima(): Promise<void> {
  if (!sweepFronts) return;
  const hash = readHash();
  if (!hash.sweep) return;
  const fronts = sweepFronts.fronts.map((f) => f.front);
  const responses = await Promise.all(fronts.map((k) => api.frontMinima(hash.sweep!, k)));
  el("minima-body").innerHTML = minimaRows(responses)
    .map((row) => `<tr><td>${row.front}</td>${row.cells.map((c) => `<td>${c}</td>`).join("")}</tr>`)
    .join("");
}

function renderSelection(index: number | null): void {
  const holder = el("selection");
  if (index === null || !sweepPage || !sweepFronts) {
    holder.innerHTML = "<p class='hint'>click a point to see its decision bounds</p>";
    return;
  }
  const detail = selectionDetail(sweepPage, sweepFronts, sweepClusters, index);
  if (!detail) return;
  const b = detail.bounds;
  holder.innerHTML =
    `<h3>record ${detail.index} · front ${detail.front}</h3>` +
    `<table><tr><th>w_min</th><th>w_max</th><th>d_max</th><th>v_avg_max</th></tr>` +
    `<tr><td>${b.w_min}</td><td>${b.w_max}</td><td>${b.d_max}</td><td>${b.v_avg_max}</td></tr></table>` +
    `<p>objectives: ${OBJECTIVE_KEYS.map((k) => `${k}=${detail.objectives[k]}`).join(", ")}</p>` +
    (detail.cluster
      ? `<p>cluster ${detail.cluster.id} on its front (${detail.cluster.size} equivalent decision tuples)</p>`
      : "");
}

function wireEvents(): void {
  for (const name of FIELDS) {
    el<HTMLInputElement>(`in-${name}`).addEventListener("input", (ev) => {
      panel = setField(panel, name, { value: Number((ev.target as HTMLInputElement).value) });
      renderBoundsForm();
    });
    el<HTMLInputElement>(`inf-${name}`).addEventListener("change", (ev) => {
      panel = setField(panel, name, { inf: (ev.target as HTMLInputElement).checked });
      renderBoundsForm();
    });
  }
  el<HTMLButtonElement>("btn-audit").addEventListener("click", () => void runAudit());
  el<HTMLFormElement>("upload-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const tt = el<HTMLInputElement>("file-timetable").files?.[0];
    const topo = el<HTMLInputElement>("file-topology").files?.[0];
    if (!tt || !topo) return;
    api
      .uploadDataset(tt, topo)
      .then((r) => loadDataset(r.dataset_id))
      .catch((e) => (el("upload-error").textContent = String(e)));
  });
  el<HTMLButtonElement>("btn-load-sweep").addEventListener("click", () => {
    const id = el<HTMLInputElement>("in-sweep-id").value.trim();
    if (id) void loadSweep(id);
  });
  el<HTMLSelectElement>("sel-x").addEventListener("change", (ev) => {
    xKey = (ev.target as HTMLSelectElement).value as ObjectiveKey;
    renderExplorer();
  });
  el<HTMLSelectElement>("sel-y").addEventListener("change", (ev) => {
    yKey = (ev.target as HTMLSelectElement).value as ObjectiveKey;
    renderExplorer();
  });
  el<HTMLInputElement>("in-eps").addEventListener("change", () => {
    const hash = readHash();
    if (hash.sweep) void loadSweep(hash.sweep);
  });
  el("history-body").addEventListener("click", (ev) => {
    const row = (ev.target as HTMLElement).closest("tr");
    if (row?.dataset.row) {
      panel = loadHistoryBounds(panel, Number(row.dataset.row));
      renderBoundsForm();
    }
  });
}

function init(): void {
  const infLabels = document.querySelectorAll(".inf-glyph");
  infLabels.forEach((node) => (node.textContent = INF_GLYPH));
  wireEvents();
  renderBoundsForm();
  renderResult();
  const hash = readHash();
  if (hash.dataset) void loadDataset(hash.dataset).catch(() => undefined);
  if (hash.sweep) void loadSweep(hash.sweep).catch(() => undefined);
}

document.addEventListener("DOMContentLoaded", init);
