import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { labelEditorFor, ReviewSession } from "../src/review.js";
import { FakeServer, tiSamples } from "./fake_server.js";

let server: FakeServer;
let api: ApiClient;

beforeEach(() => {
  server = new FakeServer();
  server.seed(tiSamples(20));
  api = new ApiClient("", server.fetch);
});

describe("keyboard review session", () => {
  it("completes a 20-sample session via shortcuts", async () => {
    const session = new ReviewSession(api, "alice");
    await session.load();
    expect(session.remaining).toBe(20);

    // 10 accepts, 5 relabels, 5 excludes — all through key handling.
    for (let i = 0; i < 10; i += 1) {
      expect(await session.handleKey("a")).toBe("decided");
    }
    for (let i = 0; i < 5; i += 1) {
      expect(await session.handleKey("r", "neutral")).toBe("decided");
    }
    for (let i = 0; i < 5; i += 1) {
      expect(await session.handleKey("x")).toBe("decided");
    }
    expect(session.done).toBe(true);
    expect(session.current).toBeNull();
    expect(server.decidedBy("accepted")).toBe(10);
    expect(server.decidedBy("relabeled")).toBe(5);
    expect(server.decidedBy("excluded")).toBe(5);
    expect(server.decidedBy("pending")).toBe(0);
  });

  it("ignores unknown keys and relabel without a label", async () => {
    const session = new ReviewSession(api, "alice");
    await session.load();
    expect(await session.handleKey("q")).toBe("ignored");
    expect(await session.handleKey("r")).toBe("ignored");
    expect(session.remaining).toBe(20);
  });

  it("reflects quota progress from the API", async () => {
    const session = new ReviewSession(api, "alice");
    await session.load();
    await session.handleKey("a");
    await session.handleKey("x");
    await session.handleKey("r", "contradiction");
    const progress = await session.progress();
    // excluded samples leave the quota unchanged
    expect(progress?.count).toBe(2);
    expect(progress?.target).toBe(200);
  });
});

describe("persistence across reload", () => {
  it("a fresh session against the same server sees decided state", async () => {
    const first = new ReviewSession(api, "alice");
    await first.load();
    for (let i = 0; i < 8; i += 1) await first.handleKey("a");

    // "Reload": brand-new client and session objects, same server state.
    const reloaded = new ReviewSession(new ApiClient("", server.fetch), "alice");
    await reloaded.load();
    expect(reloaded.remaining).toBe(12);

    const decided = await new ApiClient("", server.fetch).queue({
      status: "accepted",
    });
    expect(decided.count).toBe(8);
    for (const item of decided.items) {
      expect(item.revision).toBe(1);
    }
  });
});

describe("conflict and failure handling", () => {
  it("refreshes and skips when the sample was decided elsewhere", async () => {
    const session = new ReviewSession(api, "alice");
    await session.load();
    const key = session.current!.key;
    // Another reviewer decides the same sample first.
    await api.decide(key, { reviewer: "bob", status: "excluded", revision: 0 });
    const outcome = await session.decide("accepted");
    expect(outcome).toBe("conflict-skipped");
    expect(session.current!.key).not.toBe(key);
    expect(server.samples.get(key)!.status).toBe("excluded");
  });

  it("retains decisions locally on network failure and retries", async () => {
    const session = new ReviewSession(api, "alice");
    await session.load();
    server.failNextDecisions = 1;
    const outcome = await session.decide("accepted");
    expect(outcome).toBe("queued-retry");
    expect(session.retryQueue).toHaveLength(1);
    expect(server.decidedBy("accepted")).toBe(0);

    const posted = await session.retry();
    expect(posted).toBe(1);
    expect(session.retryQueue).toHaveLength(0);
    expect(server.decidedBy("accepted")).toBe(1);
  });
});

describe("relabel editor selection", () => {
  it("is task-appropriate", async () => {
    const session = new ReviewSession(api, "alice");
    await session.load();
    const view = session.current!;
    expect(labelEditorFor(view)).toEqual({
      kind: "class-picker",
      options: ["entailment", "contradiction", "neutral"],
    });
    expect(
      labelEditorFor({ ...view, task: "ss" }),
    ).toEqual({ kind: "score-slider", min: 0, max: 5, step: 0.1 });
    expect(
      labelEditorFor({ ...view, task: "ner", record: { tokens: ["a", "b"] } }),
    ).toEqual({ kind: "tag-editor", tokens: ["a", "b"] });
  });
});
