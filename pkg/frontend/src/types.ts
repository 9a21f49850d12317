/** Wire types of the fcm-bias HTTP service. */

export type Terminal =
  | { kind: "fixed_point"; atIteration: number }
  | { kind: "limit_cycle"; period: number; fromIteration: number }
  | { kind: "inconclusive" };

export interface TraceBody {
  config: Record<string, unknown>;
  states: number[][];
  terminal: Terminal;
}

export interface SimulateResponse {
  trace: TraceBody;
  terminal: Terminal;
  protectedActivations: Record<string, number>;
  conceptNames: string[];
}

export interface WeightsResponse {
  conceptNames: string[];
  weights: number[];
  significance: boolean[];
  protected: string[];
  manifest?: string;
}

export interface Edge {
  source: string;
  target: string;
  weight: number;
  significant: boolean;
}

export interface EdgesResponse {
  edges: Edge[];
}

export interface ModelInfo {
  modelId: string;
  conceptNames: string[];
  warnings: string[];
}

export interface ErrorBody {
  code: string;
  message: string;
  detail?: string;
}

export interface ConceptStatsBody {
  mean: number;
  min: number;
  max: number;
  stddev: number;
}

export interface BiasReportBody {
  phi: number;
  protected: string[];
  stats: Record<string, ConceptStatsBody>;
  per_run: number[][];
  converged_count: number;
  limit_cycle_count: number;
  inconclusive_count: number;
  dispersion: number | null;
}

export interface SweepResponse {
  phis: number[];
  seed: number;
  reports: BiasReportBody[];
}
