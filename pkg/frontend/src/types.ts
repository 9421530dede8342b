/** Wire types of the audit service. Infinity travels as the string "inf". */

export type WireNumber = number | "inf";

export interface WireBounds {
  w_min: WireNumber;
  w_max: WireNumber;
  d_max: WireNumber;
  v_avg_max: WireNumber;
}

export interface Objectives {
  f1: number;
  f2: number;
  f3: number;
  f4: number;
  f5: number;
}

export interface AuditResponse {
  fleet_size: number;
  objectives: Objectives;
  links: string[][];
  peak_density: number;
  solve_millis: number;
  bounds: WireBounds;
}

export interface ServiceRow {
  service_id: string;
  origin: string;
  destination: string;
  dep_time: number;
  arr_time: number;
  run_distance_km: number;
}

export interface DatasetDetail {
  dataset_id: string;
  service_count: number;
  stations: string[];
  services: ServiceRow[];
}

export interface DensityResponse {
  dataset_id: string;
  peak: number;
  counts: number[];
}

export interface SweepRecordRow {
  index: number;
  bounds: WireBounds;
  objectives?: Objectives;
  solution_ref?: string;
  error?: string;
}

export interface RecordsPage {
  sweep_id: string;
  total: number;
  offset: number;
  records: SweepRecordRow[];
}

export interface FrontsResponse {
  sweep_id: string;
  finite_v_only: boolean;
  record_count: number;
  fronts: { front: number; size: number; records: number[] }[];
}

export interface MinimaResponse {
  sweep_id: string;
  front: number;
  minima: Record<keyof Objectives, WireNumber>;
}

export interface ClustersResponse {
  sweep_id: string;
  eps: string;
  clusters: {
    front: number;
    cluster_id: number;
    records: number[];
    representative: Record<keyof Objectives, WireNumber>;
  }[];
}

export interface SweepStatus {
  sweep_id: string;
  status: "pending" | "running" | "done" | "failed";
  completed: number;
  total: number;
  progress: number;
  error?: string;
}

export const OBJECTIVE_KEYS = ["f1", "f2", "f3", "f4", "f5"] as const;
export type ObjectiveKey = (typeof OBJECTIVE_KEYS)[number];
