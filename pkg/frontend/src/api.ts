/** Typed client for the fcm-bias service; the UI's only data source. */

import type {
  EdgesResponse,
  ErrorBody,
  ModelInfo,
  SimulateResponse,
  SweepResponse,
  WeightsResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(body.message);
    this.name = "ApiError";
  }
}

export interface SimulateRequest {
  initial: Record<string, number>;
  phi: number;
  iters?: number;
  transfer?: string;
}

export interface SweepRequest {
  scenario: {
    activate: string[] | Record<string, number>;
    count?: number;
    seed?: number;
    subset_size?: number;
  };
  phis: number[];
  seed?: number;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let body: ErrorBody;
      try {
        body = (await response.json()) as ErrorBody;
      } catch {
        body = { code: "unknown_error", message: response.statusText };
      }
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as T;
  }

  createModel(data: Blob, schema: Blob, options: Record<string, unknown> = {}): Promise<ModelInfo> {
    const form = new FormData();
    form.append("data", data, "data.csv");
    form.append("schema", schema, "schema.json");
    form.append("options", JSON.stringify(options));
    return this.request<ModelInfo>("/models", { method: "POST", body: form });
  }

  getWeights(modelId: string): Promise<WeightsResponse> {
    return this.request<WeightsResponse>(`/models/${modelId}/weights`);
  }

  getEdges(modelId: string): Promise<EdgesResponse> {
    return this.request<EdgesResponse>(`/models/${modelId}/weights?format=edges`);
  }

  simulate(modelId: string, body: SimulateRequest): Promise<SimulateResponse> {
    return this.request<SimulateResponse>(`/models/${modelId}/simulate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  sweep(modelId: string, body: SweepRequest): Promise<SweepResponse> {
    return this.request<SweepResponse>(`/models/${modelId}/sweep`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }
}
