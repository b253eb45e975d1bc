// Wire types of the session service. The console never recomputes dynamics;
// everything here mirrors a server document exactly.

export type CellStateName =
  | "normal"
  | "proliferative"
  | "inflamed"
  | "quiescent"
  | "metastatic"
  | "dead";

export interface SnapshotNode {
  id: number;
  state: CellStateName;
  origin: "seed" | "grown";
}

export interface SnapshotLink {
  src: number;
  dst: number;
}

export interface GraphSnapshot {
  node_count: number;
  nodes: SnapshotNode[];
  links: SnapshotLink[];
}

export interface SwitchConfig {
  angioprevention: number;
  angiogenesis: number;
  quiescent: number;
}

export interface DriverConfig {
  u: number;
  d: number;
  k: number;
  N: number;
}

export interface CreateSessionRequest {
  n: number;
  p_edge: number;
  driver: DriverConfig;
  switch: SwitchConfig;
  seed: number;
}

export interface StepMetricsRow {
  step: number;
  n_nodes: number;
  n_normal: number;
  n_proliferative: number;
  n_inflamed: number;
  n_quiescent: number;
  n_metastatic: number;
  n_dead: number;
  dead_inflamed_ratio: number | null;
  p_redirect: number;
  n_new: number;
}

export interface SwitchChange extends SwitchConfig {
  step: number;
}

export interface MetricsResponse {
  metrics: StepMetricsRow[];
  switch_changes: SwitchChange[];
}

export interface ProfileResponse {
  derived_cell_ids: number[];
  essential_genomic_profile: number;
  mean_genomic_profile: number;
}

export interface ApiError {
  error: string;
  field?: string;
}
