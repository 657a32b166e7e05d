/** In-memory stand-in for the curation API, mirroring its endpoint
 * semantics (status lifecycle, optimistic revisions, duplicate-rating
 * conflicts, quota progress). Exposes a fetch-compatible function so the
 * ApiClient under test is exercised end to end. */

import type { DiffSpan, RatingStats } from "../src/api.js";

export interface SeedSample {
  key: string;
  id: string;
  task: string;
  dataset: string;
  method: string;
  noisy: Record<string, string>;
  original: Record<string, string>;
  diff: Record<string, DiffSpan[]>;
  gold_label: unknown;
  record?: Record<string, unknown>;
}

interface StoredSample extends SeedSample {
  status: string;
  revision: number;
  revised_label: unknown;
  reviewer: string | null;
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export class FakeServer {
  samples = new Map<string, StoredSample>();
  ratings = new Map<string, { category: string; part: string }>();
  questionnaireKeys: Record<string, string[]> = {};
  statsByPart: Record<string, RatingStats> = {};
  quotaTarget = 200;
  failNextDecisions = 0; // simulate transport failures

  seed(samples: SeedSample[]): void {
    for (const s of samples) {
      this.samples.set(s.key, {
        ...s,
        record: s.record ?? {},
        status: "pending",
        revision: 0,
        revised_label: null,
        reviewer: null,
      });
    }
  }

  decidedBy(status: string): number {
    return [...this.samples.values()].filter((s) => s.status === status)
      .length;
  }

  /** fetch-compatible entry point. */
  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input, "http://fake");
    const method = init?.method ?? "GET";
    const path = url.pathname;

    if (method === "GET" && path === "/api/queue") {
      return this.handleQueue(url);
    }
    const decision = path.match(/^\/api\/samples\/(.+)\/decision$/);
    if (method === "POST" && decision) {
      return this.handleDecision(
        decodeURIComponent(decision[1]),
        JSON.parse(String(init?.body)),
      );
    }
    const sample = path.match(/^\/api\/samples\/(.+)$/);
    if (method === "GET" && sample) {
      return this.handleSample(decodeURIComponent(sample[1]));
    }
    if (method === "GET" && path === "/api/progress") {
      return this.handleProgress(url);
    }
    if (method === "POST" && path === "/api/ratings") {
      return this.handleRating(JSON.parse(String(init?.body)));
    }
    if (method === "GET" && path === "/api/questionnaire") {
      const part = url.searchParams.get("part") ?? "";
      const size = url.searchParams.get("size");
      let keys = this.questionnaireKeys[part] ?? [];
      if (size !== null) keys = keys.slice(0, Number(size));
      return json(200, { part, samples: keys });
    }
    if (method === "GET" && path === "/api/stats") {
      const part = url.searchParams.get("part") ?? "";
      const stats = this.statsByPart[part];
      if (!stats) {
        return json(404, { error: "not-found", detail: `no ratings for ${part}` });
      }
      return json(200, stats);
    }
    return json(404, { error: "not-found", detail: `no route ${path}` });
  };

  private handleQueue(url: URL): Response {
    const status = url.searchParams.get("status");
    const method = url.searchParams.get("method");
    const dataset = url.searchParams.get("dataset");
    const items = [...this.samples.values()]
      .filter(
        (s) =>
          (status === null || s.status === status) &&
          (method === null || s.method === method) &&
          (dataset === null || s.dataset === dataset),
      )
      .map((s) => ({
        key: s.key,
        id: s.id,
        method: s.method,
        dataset: s.dataset,
        status: s.status,
        revision: s.revision,
      }))
      .sort((a, b) => (a.key < b.key ? -1 : 1));
    return json(200, { count: items.length, items });
  }

  private handleSample(key: string): Response {
    const s = this.samples.get(key);
    if (!s) return json(404, { error: "not-found", detail: `unknown ${key}` });
    return json(200, {
      key: s.key,
      id: s.id,
      task: s.task,
      dataset: s.dataset,
      method: s.method,
      status: s.status,
      revision: s.revision,
      revised_label: s.revised_label,
      noisy: s.noisy,
      original: s.original,
      diff: s.diff,
      gold_label: s.gold_label,
      record: s.record,
    });
  }

  private handleDecision(
    key: string,
    body: {
      reviewer?: string;
      status?: string;
      revised_label?: unknown;
      revision?: number;
    },
  ): Response {
    if (this.failNextDecisions > 0) {
      this.failNextDecisions -= 1;
      throw new TypeError("network failure (simulated)");
    }
    const s = this.samples.get(key);
    if (!s) return json(404, { error: "not-found", detail: `unknown ${key}` });
    if (!body.reviewer || !body.status) {
      return json(400, { error: "bad-request", detail: "missing fields" });
    }
    if (!["accepted", "relabeled", "excluded"].includes(body.status)) {
      return json(400, { error: "bad-request", detail: "bad status" });
    }
    if (body.revision !== undefined && body.revision !== s.revision) {
      return json(409, {
        error: "conflict",
        detail: `at revision ${s.revision}`,
      });
    }
    if (body.status === "relabeled" && body.revised_label == null) {
      return json(400, { error: "bad-request", detail: "label required" });
    }
    s.status = body.status;
    s.revised_label = body.revised_label ?? null;
    s.reviewer = body.reviewer;
    s.revision += 1;
    return json(200, {
      key: s.key,
      status: s.status,
      revision: s.revision,
      revised_label: s.revised_label,
    });
  }

  private handleProgress(url: URL): Response {
    const method = url.searchParams.get("method");
    const dataset = url.searchParams.get("dataset");
    const relevant = [...this.samples.values()].filter(
      (s) => s.method === method && s.dataset === dataset,
    );
    if (relevant.length === 0) {
      return json(404, { error: "not-found", detail: "no samples" });
    }
    const count = relevant.filter((s) =>
      ["accepted", "relabeled"].includes(s.status),
    ).length;
    return json(200, {
      method,
      dataset,
      target: this.quotaTarget,
      count,
      remaining: Math.max(0, this.quotaTarget - count),
      paused: count >= this.quotaTarget,
    });
  }

  private handleRating(body: {
    rater?: string;
    sample?: string;
    category?: string;
    part?: string;
  }): Response {
    if (!body.rater || !body.sample || !body.category || !body.part) {
      return json(400, { error: "bad-request", detail: "missing fields" });
    }
    if (!this.samples.has(body.sample)) {
      return json(404, { error: "not-found", detail: "unknown sample" });
    }
    const dedupe = `${body.rater}${body.sample}`;
    if (this.ratings.has(dedupe)) {
      return json(409, { error: "conflict", detail: "already rated" });
    }
    this.ratings.set(dedupe, { category: body.category, part: body.part });
    return json(200, { ok: true });
  }
}

/** Convenience seed: n TI samples with a single-word replacement diff. */
export function tiSamples(n: number, method = "rws"): SeedSample[] {
  const out: SeedSample[] = [];
  for (let i = 0; i < n; i += 1) {
    const id = `ti-${String(i).padStart(4, "0")}`;
    const original = "The patient reported the procedure today.";
    const noisy = "The patient reported the therapy today.";
    out.push({
      key: `fix:${method}:${id}`,
      id,
      task: "ti",
      dataset: "fix",
      method,
      original: { premise: original, hypothesis: "The summary confirms it." },
      noisy: { premise: noisy, hypothesis: "The summary confirms it." },
      diff: {
        premise: [
          {
            op: "replace",
            original_start: 25,
            original_end: 34,
            noisy_start: 25,
            noisy_end: 32,
          },
        ],
        hypothesis: [],
      },
      gold_label: "entailment",
      record: { tokens: [] },
    });
  }
  return out;
}
