import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  categoryFromAnswers,
  QuestionnaireSession,
} from "../src/questionnaire.js";
import { FakeServer, tiSamples } from "./fake_server.js";

let server: FakeServer;
let api: ApiClient;

beforeEach(() => {
  server = new FakeServer();
  const samples = tiSamples(50);
  server.seed(samples);
  server.questionnaireKeys["low-risk"] = samples.map((s) => s.key);
  api = new ApiClient("", server.fetch);
});

describe("question-to-category mapping", () => {
  it("maps the two questions to the three categories", () => {
    expect(categoryFromAnswers({ understandable: false })).toBe(
      "not-understandable",
    );
    expect(
      categoryFromAnswers({ understandable: true, sameMeaning: true }),
    ).toBe("same-meaning");
    expect(
      categoryFromAnswers({ understandable: true, sameMeaning: false }),
    ).toBe("changed-meaning");
  });

  it("requires the second answer when understandable", () => {
    expect(() => categoryFromAnswers({ understandable: true })).toThrow();
  });
});

describe("questionnaire session", () => {
  it("posts exactly 50 ratings for a 50-sample session", async () => {
    const session = new QuestionnaireSession(api, "r1", "low-risk");
    await session.load();
    expect(session.keys).toHaveLength(50);

    let i = 0;
    while (!session.done) {
      const answers =
        i % 5 === 4
          ? { understandable: false }
          : { understandable: true, sameMeaning: i % 2 === 0 };
      expect(await session.rate(answers)).toBe("posted");
      i += 1;
    }
    expect(session.posted).toBe(50);
    expect(server.ratings.size).toBe(50);
    const summary = session.summary();
    expect(
      summary.counts["same-meaning"] +
        summary.counts["changed-meaning"] +
        summary.counts["not-understandable"],
    ).toBe(50);
  });

  it("surfaces duplicate ratings as conflicts and moves on", async () => {
    const session = new QuestionnaireSession(api, "r1", "low-risk");
    await session.load(2);
    // Pre-rate the first sample as the same rater.
    await api.rate({
      rater: "r1",
      sample: session.keys[0],
      category: "same-meaning",
      part: "low-risk",
    });
    expect(
      await session.rate({ understandable: true, sameMeaning: true }),
    ).toBe("duplicate");
    expect(session.duplicates).toBe(1);
    expect(
      await session.rate({ understandable: true, sameMeaning: true }),
    ).toBe("posted");
    expect(session.done).toBe(true);
    expect(session.posted).toBe(1);
  });
});
