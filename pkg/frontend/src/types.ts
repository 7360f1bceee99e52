// Mirrors of the service JSON payloads. The client consumes exactly these
// shapes and computes no statistics of its own.

export type Modality = 'a' | 'b';

export type ViewName =
  | 'heatmap_a' | 'heatmap_b'
  | 'silhouette_a' | 'silhouette_b'
  | 'graph_a' | 'graph_b'
  | 'parallel_sets';

export interface SessionSummary {
  session_id: string;
  revision: number;
  phase: string;
  summary: {
    samples: number;
    features_a: number;
    features_b: number;
    dropped: Record<string, number>;
  };
  selections?: Record<string, { size: number }>;
}

export interface FeaturePage {
  modality: Modality;
  total: number;
  offset: number;
  limit: number;
  feature_ids: string[];
}

export interface SetFeaturesResult {
  revision: number;
  phase: string;
  modality: Modality;
  matched: string[];
  unmatched: string[];
}

export interface ClusterRequest {
  method: 'kmeans' | 'spectral' | 'community';
  k?: number;
  seed: number;
  metric?: 'euclidean' | 'pearson';
  threshold?: number;
}

export interface ClusterResult {
  revision: number;
  phase: string;
  modality: Modality;
  method: string;
  k: number;
  cluster_sizes: number[];
  wcss: number | null;
  silhouette_mean: number | null;
}

export interface HeatmapBlock {
  cluster: number;
  start: number;
  size: number;
  color: string;
}

export interface HeatmapPayload {
  modality: Modality;
  feature_ids: string[];
  sample_order: string[];
  blocks: HeatmapBlock[];
  values: number[][];
}

export interface SilhouettePayload {
  modality: Modality;
  mean: number;
  clusters: {
    cluster: number;
    color: string;
    mean: number;
    members: { id: string; s: number }[];
  }[];
}

export interface GraphPayload {
  metric: string;
  threshold: number;
  nodes: { id: string; cluster: number | null; color?: string }[];
  links: { source: string; target: string; weight: number }[];
}

export interface PsetsBlock {
  cluster: number;
  size: number;
  color: string;
}

export interface PsetsRibbon {
  a: number;
  b: number;
  size: number;
}

export interface ParallelSetsPayload {
  n: number;
  blocks_a: PsetsBlock[];
  blocks_b: PsetsBlock[];
  ribbons: PsetsRibbon[];
}

export type SelectionAtom =
  | { kind: 'block'; modality: Modality; cluster: number }
  | { kind: 'ribbon'; a: number; b: number };

export interface SelectionResult {
  revision: number;
  phase: string;
  name: string;
  size?: number;
  removed?: boolean;
}

export interface CurvePayload {
  label: string;
  n_total: number;
  times: number[];
  n_at_risk: number[];
  events: number[];
  survival: number[];
  variance: number[];
  censor_times: number[];
  variance_saturated: boolean;
}

export interface LogrankPayload {
  labels: string[];
  observed: number[];
  expected: number[];
  statistic: number;
  degrees_of_freedom: number;
  p_value: number;
}

export interface SurvivalPayload {
  curves: CurvePayload[];
  logrank: LogrankPayload | null;
  revision: number;
  phase: string;
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  detail: unknown;
}
