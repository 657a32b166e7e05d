/** Typed client for the curation HTTP API. All server communication in the
 * UI goes through this module, so the rest of the code never touches fetch
 * directly and tests can inject a fake transport. */

export interface QueueItem {
  key: string;
  id: string;
  method: string;
  dataset: string;
  status: string;
  revision: number;
}

export interface QueueState {
  count: number;
  items: QueueItem[];
}

export interface DiffSpan {
  op: "insert" | "delete" | "replace";
  original_start: number;
  original_end: number;
  noisy_start: number;
  noisy_end: number;
}

export interface SampleView {
  key: string;
  id: string;
  task: string;
  dataset: string;
  method: string;
  status: string;
  revision: number;
  revised_label: unknown;
  noisy: Record<string, string>;
  original: Record<string, string>;
  diff: Record<string, DiffSpan[]>;
  gold_label: unknown;
  record: Record<string, unknown>;
}

export interface DecisionResult {
  key: string;
  status: string;
  revision: number;
  revised_label: unknown;
}

export interface Progress {
  method: string;
  dataset: string;
  target: number;
  count: number;
  remaining: number;
  paused: boolean;
}

export interface RatingStats {
  part: string;
  n_samples: number;
  n_raters: number;
  percent: Record<string, number>;
  tie_percent: number;
  matrix: number[][];
  kappa: number | null;
  band: string;
}

export type DecisionStatus = "accepted" | "relabeled" | "excluded";
export type RatingCategory =
  | "same-meaning"
  | "changed-meaning"
  | "not-understandable";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly error: string,
    public readonly detail: string,
  ) {
    super(`${error}: ${detail}`);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      let error = "error";
      let detail = resp.statusText;
      try {
        const payload = (await resp.json()) as {
          error?: string;
          detail?: string;
        };
        error = payload.error ?? error;
        detail = payload.detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, error, detail);
    }
    return (await resp.json()) as T;
  }

  queue(params: {
    method?: string;
    dataset?: string;
    status?: string;
  } = {}): Promise<QueueState> {
    const query = new URLSearchParams();
    if (params.method) query.set("method", params.method);
    if (params.dataset) query.set("dataset", params.dataset);
    if (params.status) query.set("status", params.status);
    const suffix = query.toString() ? `?${query.toString()}` : "";
    return this.request("GET", `/api/queue${suffix}`);
  }

  sample(key: string): Promise<SampleView> {
    return this.request("GET", `/api/samples/${key}`);
  }

  decide(
    key: string,
    body: {
      reviewer: string;
      status: DecisionStatus;
      revised_label?: unknown;
      note?: string;
      revision?: number;
    },
  ): Promise<DecisionResult> {
    return this.request("POST", `/api/samples/${key}/decision`, body);
  }

  progress(method: string, dataset: string): Promise<Progress> {
    const query = new URLSearchParams({ method, dataset });
    return this.request("GET", `/api/progress?${query.toString()}`);
  }

  rate(body: {
    rater: string;
    sample: string;
    category: RatingCategory;
    part: string;
  }): Promise<{ ok: boolean }> {
    return this.request("POST", "/api/ratings", body);
  }

  questionnaire(
    part: string,
    size?: number,
  ): Promise<{ part: string; samples: string[] }> {
    const query = new URLSearchParams({ part });
    if (size !== undefined) query.set("size", String(size));
    return this.request("GET", `/api/questionnaire?${query.toString()}`);
  }

  stats(part: string): Promise<RatingStats> {
    const query = new URLSearchParams({ part });
    return this.request("GET", `/api/stats?${query.toString()}`);
  }
}
