/** Review-session state machine: one pending sample at a time, keyboard
 * decisions, optimistic-concurrency conflicts handled by refresh-and-skip,
 * and network failures retained locally for retry. All state lives on the
 * server; reloading the page rebuilds the session from /api/queue. */

import {
  ApiClient,
  ApiError,
  type DecisionStatus,
  type Progress,
  type QueueItem,
  type SampleView,
} from "./api.js";

export const KEY_BINDINGS: Record<string, DecisionStatus> = {
  a: "accepted",
  r: "relabeled",
  x: "excluded",
};

export interface PendingRetry {
  key: string;
  status: DecisionStatus;
  revisedLabel?: unknown;
  revision: number;
}

export type DecideOutcome = "decided" | "conflict-skipped" | "queued-retry";

export interface ReviewFilter {
  method?: string;
  dataset?: string;
}

export class ReviewSession {
  pending: QueueItem[] = [];
  current: SampleView | null = null;
  retryQueue: PendingRetry[] = [];
  decidedCount = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly reviewer: string,
    private readonly filter: ReviewFilter = {},
  ) {}

  /** Fetch the pending queue and load the first sample. */
  async load(): Promise<void> {
    const state = await this.api.queue({ ...this.filter, status: "pending" });
    this.pending = state.items;
    await this.advance();
  }

  get remaining(): number {
    return this.pending.length;
  }

  get done(): boolean {
    return this.pending.length === 0;
  }

  private async advance(): Promise<void> {
    while (this.pending.length > 0) {
      const next = this.pending[0];
      try {
        const view = await this.api.sample(next.key);
        if (view.status !== "pending") {
          // Decided elsewhere since the queue snapshot; drop silently.
          this.pending.shift();
          continue;
        }
        this.current = view;
        return;
      } catch (err) {
        if (err instanceof ApiError && err.status === 404) {
          this.pending.shift();
          continue;
        }
        throw err;
      }
    }
    this.current = null;
  }

  /** Apply a keyboard shortcut. "r" requires the label collected by the
   * relabel editor; "a"/"x" decide immediately. Unknown keys are ignored. */
  async handleKey(
    key: string,
    revisedLabel?: unknown,
  ): Promise<DecideOutcome | "ignored"> {
    const status = KEY_BINDINGS[key];
    if (!status || this.current === null) return "ignored";
    if (status === "relabeled" && revisedLabel === undefined) return "ignored";
    return this.decide(status, revisedLabel);
  }

  async decide(
    status: DecisionStatus,
    revisedLabel?: unknown,
  ): Promise<DecideOutcome> {
    if (this.current === null) {
      throw new Error("no sample loaded");
    }
    const view = this.current;
    try {
      await this.api.decide(view.key, {
        reviewer: this.reviewer,
        status,
        revised_label: revisedLabel,
        revision: view.revision,
      });
    } catch (err) {
      if (err instanceof ApiError && err.isConflict) {
        // Decided elsewhere: refresh the queue entry and skip the sample.
        this.pending.shift();
        await this.advance();
        return "conflict-skipped";
      }
      if (err instanceof ApiError) {
        throw err;
      }
      // Transport failure: retain the decision locally and move on.
      this.retryQueue.push({
        key: view.key,
        status,
        revisedLabel,
        revision: view.revision,
      });
      this.pending.shift();
      await this.advance();
      return "queued-retry";
    }
    this.decidedCount += 1;
    this.pending.shift();
    await this.advance();
    return "decided";
  }

  /** Re-post decisions that failed on the network; conflicts are dropped. */
  async retry(): Promise<number> {
    const queued = this.retryQueue;
    this.retryQueue = [];
    let posted = 0;
    for (const entry of queued) {
      try {
        await this.api.decide(entry.key, {
          reviewer: this.reviewer,
          status: entry.status,
          revised_label: entry.revisedLabel,
          revision: entry.revision,
        });
        posted += 1;
        this.decidedCount += 1;
      } catch (err) {
        if (err instanceof ApiError) continue; // conflict or rejection: drop
        this.retryQueue.push(entry);
      }
    }
    return posted;
  }

  async progress(): Promise<Progress | null> {
    const method = this.filter.method ?? this.current?.method;
    const dataset = this.filter.dataset ?? this.current?.dataset;
    if (!method || !dataset) return null;
    return this.api.progress(method, dataset);
  }
}

/** Task-appropriate relabel editor configuration. */
export type LabelEditor =
  | { kind: "class-picker"; options: string[] }
  | { kind: "score-slider"; min: number; max: number; step: number }
  | { kind: "tag-editor"; tokens: string[] };

export function labelEditorFor(view: SampleView): LabelEditor {
  if (view.task === "ti") {
    return {
      kind: "class-picker",
      options: ["entailment", "contradiction", "neutral"],
    };
  }
  if (view.task === "ss") {
    return { kind: "score-slider", min: 0, max: 5, step: 0.1 };
  }
  if (view.task === "ner") {
    const tokens = (view.record["tokens"] as string[]) ?? [];
    return { kind: "tag-editor", tokens };
  }
  // RE labels are free-form class names; offer the current one as a seed.
  return {
    kind: "class-picker",
    options: typeof view.gold_label === "string" ? [view.gold_label] : [],
  };
}
