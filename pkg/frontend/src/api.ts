/** Thin client for the summary service. fetch is injectable for tests. */

import type {
  CoverJson,
  GraphJson,
  LensPayload,
  MogRequest,
  SummaryJson,
  UploadResponse,
} from "./types.js";

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly stage: string,
    message: string,
  ) {
    super(message);
  }
}

async function asError(response: Response): Promise<ServiceError> {
  let stage = "request";
  let message = `${response.status}`;
  try {
    const body = (await response.json()) as { error?: { stage?: string; message?: string } };
    stage = body.error?.stage ?? stage;
    message = body.error?.message ?? message;
  } catch {
    /* non-JSON error body */
  }
  return new ServiceError(response.status, stage, message);
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly pollMs = 250,
  ) {}

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok && response.status !== 202) throw await asError(response);
    return (await response.json()) as T;
  }

  uploadGraph(body: string, format?: string): Promise<UploadResponse> {
    const query = format ? `?format=${encodeURIComponent(format)}` : "";
    return this.json(`/graphs${query}`, { method: "POST", body });
  }

  getGraph(id: string): Promise<GraphJson> {
    return this.json(`/graphs/${id}`);
  }

  getLayout(id: string, seed = 0, iterations = 100): Promise<GraphJson> {
    return this.json(`/graphs/${id}/layout?seed=${seed}&iterations=${iterations}`);
  }

  /** Lens fetch, transparently polling when the service answers 202. */
  async getLens(
    id: string,
    kind: string,
    params: Record<string, number> = {},
    onPending?: () => void,
  ): Promise<LensPayload> {
    const query = new URLSearchParams(
      Object.entries(params).map(([k, v]) => [k, String(v)]),
    ).toString();
    const path = `/graphs/${id}/lens/${kind}${query ? `?${query}` : ""}`;
    const first = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!first.ok && first.status !== 202) throw await asError(first);
    let body = (await first.json()) as LensPayload & { status?: string; poll?: string };
    while (body.status === "pending" && body.poll) {
      onPending?.();
      await new Promise((resolve) => setTimeout(resolve, this.pollMs));
      const poll = await this.fetchImpl(`${this.baseUrl}${body.poll}`);
      if (!poll.ok) throw await asError(poll);
      body = (await poll.json()) as LensPayload & { status?: string; poll?: string };
    }
    return body;
  }

  postMog(id: string, lens: MogRequest["lens"], cover: CoverJson, filter?: MogRequest["filter"]): Promise<SummaryJson> {
    const request: MogRequest = { lens, cover, filter, layout: { seed: 0, iterations: 100 } };
    return this.json(`/graphs/${id}/mog`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
  }
}
