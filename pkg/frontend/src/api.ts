/** Thin fetch client for the audit service. All numbers stay in wire form
 * ("inf" strings) until the view layer converts them. */

import type {
  AuditResponse,
  ClustersResponse,
  DatasetDetail,
  DensityResponse,
  FrontsResponse,
  MinimaResponse,
  RecordsPage,
  SweepStatus,
  WireBounds,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public payload: unknown,
  ) {
    super(describe(status, payload));
  }
}

function describe(status: number, payload: unknown): string {
  if (payload && typeof payload === "object") {
    const p = payload as Record<string, unknown>;
    if (typeof p.detail === "string") return p.detail;
    if (p.errors && typeof p.errors === "object") {
      return Object.entries(p.errors as Record<string, string>)
        .map(([k, v]) => `${k}: ${v}`)
        .join("; ");
    }
  }
  return `request failed with status ${status}`;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const body = await resp.json().catch(() => null);
  if (!resp.ok) throw new ApiError(resp.status, body);
  return body as T;
}

export class Api {
  constructor(private base = "") {}

  uploadDataset(timetable: File, topology: File): Promise<{ dataset_id: string }> {
    const form = new FormData();
    form.append("timetable", timetable);
    form.append("topology", topology);
    return fetch(`${this.base}/datasets`, { method: "POST", body: form }).then(async (resp) => {
      const body = await resp.json().catch(() => null);
      // duplicate upload still identifies the dataset
      if (resp.status === 409 && body && typeof body === "object" && "dataset_id" in body) {
        return body as { dataset_id: string };
      }
      if (!resp.ok) throw new ApiError(resp.status, body);
      return body as { dataset_id: string };
    });
  }

  dataset(id: string): Promise<DatasetDetail> {
    return request(`${this.base}/datasets/${id}`);
  }

  audit(id: string, bounds: WireBounds): Promise<AuditResponse> {
    return request(`${this.base}/datasets/${id}/audit`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ bounds }),
    });
  }

  density(id: string): Promise<DensityResponse> {
    return request(`${this.base}/datasets/${id}/density`);
  }

  startSweep(id: string, grid: Record<string, unknown>): Promise<{ sweep_id: string }> {
    return request(`${this.base}/datasets/${id}/sweeps`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ grid }),
    });
  }

  sweepStatus(id: string): Promise<SweepStatus> {
    return request(`${this.base}/sweeps/${id}`);
  }

  records(id: string, limit = 5000): Promise<RecordsPage> {
    return request(`${this.base}/sweeps/${id}/records?limit=${limit}`);
  }

  fronts(id: string, finiteVOnly = false): Promise<FrontsResponse> {
    return request(`${this.base}/sweeps/${id}/fronts?finite_v_only=${finiteVOnly}`);
  }

  frontMinima(id: string, front: number): Promise<MinimaResponse> {
    return request(`${this.base}/sweeps/${id}/fronts/${front}/minima`);
  }

  clusters(id: string, eps: string): Promise<ClustersResponse> {
    return request(`${this.base}/sweeps/${id}/clusters?eps=${encodeURIComponent(eps)}`);
  }
}
