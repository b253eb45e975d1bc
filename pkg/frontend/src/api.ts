import type {
  ApiError,
  CreateSessionRequest,
  GraphSnapshot,
  MetricsResponse,
  ProfileResponse,
  StepMetricsRow,
  SwitchConfig,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    message: string,
    public readonly field?: string,
  ) {
    super(message);
    this.name = "ApiRequestError";
  }

  get busy(): boolean {
    return this.status === 409;
  }
}

export interface SessionState {
  session_id: string;
  node_count: number;
  step_index: number;
  p_redirect: number;
  switch: SwitchConfig;
}

export class SessionClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (...args) =>
      fetch(...(args as Parameters<typeof fetch>)),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: Parameters<FetchLike>[1] = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchFn(this.baseUrl + path, init);
    const doc = (await res.json()) as T & Partial<ApiError>;
    if (res.status >= 400) {
      const err = doc as ApiError;
      throw new ApiRequestError(res.status, err.error ?? "request failed", err.field);
    }
    return doc;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  createSession(
    req: CreateSessionRequest,
  ): Promise<{ session_id: string; node_count: number }> {
    return this.request("POST", "/sessions", req);
  }

  grow(
    sessionId: string,
    nNew: number,
  ): Promise<{ n_new: number; node_count: number; p_redirect: number }> {
    return this.request("POST", `/sessions/${sessionId}/grow`, { n_new: nNew });
  }

  setSwitch(
    sessionId: string,
    sw: SwitchConfig,
  ): Promise<{ ok: boolean; switch: SwitchConfig }> {
    return this.request("POST", `/sessions/${sessionId}/switch`, sw);
  }

  step(sessionId: string, k: number): Promise<{ metrics: StepMetricsRow[] }> {
    return this.request("POST", `/sessions/${sessionId}/step`, { k });
  }

  snapshot(sessionId: string): Promise<GraphSnapshot> {
    return this.request("GET", `/sessions/${sessionId}/snapshot`);
  }

  metrics(sessionId: string): Promise<MetricsResponse> {
    return this.request("GET", `/sessions/${sessionId}/metrics`);
  }

  profile(sessionId: string): Promise<ProfileResponse> {
    return this.request("GET", `/sessions/${sessionId}/profile`);
  }

  state(sessionId: string): Promise<SessionState> {
    return this.request("GET", `/sessions/${sessionId}/state`);
  }

  fork(sessionId: string): Promise<{ session_id: string }> {
    return this.request("POST", `/sessions/${sessionId}/fork`);
  }

  deleteSession(sessionId: string): Promise<{ ok: boolean }> {
    return this.request("DELETE", `/sessions/${sessionId}`);
  }
}
