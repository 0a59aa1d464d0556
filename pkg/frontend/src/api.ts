/** Thin typed client over the annotation JSON API. */

import type {
  AgreementReport,
  LabelRecord,
  LabelSubmission,
  PairsPage,
  PairView,
  Progress,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** The server answered with a non-2xx status. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** The request never produced a server response (offline, dropped, ...). */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`network failure: ${String(cause)}`);
    this.name = "NetworkError";
  }
}

export interface ApiClientOptions {
  fetchImpl?: FetchLike;
  token?: string;
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;
  private readonly token?: string;

  constructor(
    readonly baseUrl: string,
    options: ApiClientOptions = {},
  ) {
    this.fetchImpl = options.fetchImpl ?? ((url, init) => fetch(url, init));
    this.token = options.token;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const headers: Record<string, string> = { ...(init?.headers as Record<string, string>) };
    if (this.token) headers["X-Auth-Token"] = this.token;

    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, { ...init, headers });
    } catch (cause) {
      throw new NetworkError(cause);
    }
    const text = await response.text();
    if (!response.ok) {
      let message = text;
      try {
        message = (JSON.parse(text) as { error?: string }).error ?? text;
      } catch {
        /* non-JSON error body; keep raw text */
      }
      throw new ApiError(response.status, message);
    }
    return JSON.parse(text) as T;
  }

  nextPairs(
    annotator: string,
    opts: { limit?: number; app?: string; inIntersectionOnly?: boolean } = {},
  ): Promise<PairsPage> {
    const params = new URLSearchParams({
      annotator,
      state: "unlabeled",
      limit: String(opts.limit ?? 1),
    });
    if (opts.app) params.set("app", opts.app);
    if (opts.inIntersectionOnly) params.set("in_intersection", "true");
    return this.request<PairsPage>(`/api/pairs?${params.toString()}`);
  }

  getPair(pairId: string): Promise<PairView> {
    return this.request<PairView>(`/api/pairs/${encodeURIComponent(pairId)}`);
  }

  submitLabel(label: LabelSubmission): Promise<{ label: LabelRecord }> {
    return this.request<{ label: LabelRecord }>("/api/labels", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(label),
    });
  }

  progress(): Promise<Progress> {
    return this.request<Progress>("/api/progress");
  }

  agreement(a?: string, b?: string): Promise<AgreementReport> {
    const params = new URLSearchParams();
    if (a) params.set("a", a);
    if (b) params.set("b", b);
    const query = params.toString();
    return this.request<AgreementReport>(`/api/agreement${query ? "?" + query : ""}`);
  }

  async exportLabels(): Promise<string> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + "/api/export", {
        headers: this.token ? { "X-Auth-Token": this.token } : undefined,
      });
    } catch (cause) {
      throw new NetworkError(cause);
    }
    if (!response.ok) throw new ApiError(response.status, await response.text());
    return response.text();
  }
}
