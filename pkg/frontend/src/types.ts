/** Wire formats of the HTTP service. Field names match the JSON exactly. */

export interface GraphNodeJson {
  id: string;
  x?: number;
  y?: number;
}

export interface GraphEdgeJson {
  source: string;
  target: string;
  weight?: number;
}

export interface GraphJson {
  nodes: GraphNodeJson[];
  edges: GraphEdgeJson[];
}

export interface IntervalJson {
  id: number;
  lo: number;
  hi: number;
}

export interface CoverJson {
  provenance: string;
  n?: number;
  epsilon?: number;
  intervals: IntervalJson[];
}

export interface LensValueJson {
  node: string;
  raw: number;
  normalized: number;
}

export interface HistogramJson {
  bin_count: number;
  bin_edges: number[];
  counts: number[];
}

export interface LensPayload {
  kind: string;
  params: Record<string, number>;
  constant: boolean;
  values: LensValueJson[];
  histogram: HistogramJson;
}

export interface SummaryNodeJson {
  id: number;
  interval: number;
  size: number;
  mean_lens: number;
  members: string[];
  x?: number;
  y?: number;
}

export interface SummaryEdgeJson {
  source: number;
  target: number;
  weight: number;
  intersection: string[];
}

export interface SummaryJson {
  nodes: SummaryNodeJson[];
  edges: SummaryEdgeJson[];
  filter: { min_component_size: number; largest_component_only: boolean };
  meta: Record<string, unknown>;
}

export interface MogRequest {
  lens: { kind: string; params?: Record<string, number> };
  cover: CoverJson;
  filter?: { min_size?: number; largest_only?: boolean };
  layout?: { seed?: number; iterations?: number };
}

export interface UploadResponse {
  id: string;
  nodes: number;
  edges: number;
}
