import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, type RatingStats } from "../src/api.js";
import { loadStats, statsRows } from "../src/stats.js";
import { FakeServer } from "./fake_server.js";

const STATS: RatingStats = {
  part: "low-risk",
  n_samples: 50,
  n_raters: 5,
  percent: {
    "same-meaning": 84.0,
    "changed-meaning": 10.0,
    "not-understandable": 4.0,
  },
  tie_percent: 2.0,
  matrix: [[5, 0, 0]],
  kappa: 0.5054,
  band: "moderate",
};

let server: FakeServer;
let api: ApiClient;

beforeEach(() => {
  server = new FakeServer();
  server.statsByPart["low-risk"] = STATS;
  api = new ApiClient("", server.fetch);
});

describe("stats page", () => {
  it("renders exactly the /api/stats payload", async () => {
    const { stats, rows } = await loadStats(api, "low-risk");
    expect(stats).toEqual(STATS); // page data is the API response verbatim

    const byLabel = Object.fromEntries(rows.map((r) => [r.label, r.value]));
    expect(byLabel["Samples"]).toBe("50");
    expect(byLabel["Raters"]).toBe("5");
    expect(byLabel["same-meaning"]).toBe("84.0%");
    expect(byLabel["Ties"]).toBe("2.0%");
    expect(byLabel["Fleiss kappa"]).toBe(String(STATS.kappa));
    expect(byLabel["Agreement band"]).toBe("moderate");
  });

  it("shows undefined kappa distinctly", () => {
    const rows = statsRows({ ...STATS, kappa: null, band: "undefined (x)" });
    const kappaRow = rows.find((r) => r.label === "Fleiss kappa");
    expect(kappaRow?.value).toBe("undefined");
  });

  it("propagates a missing part as an API error", async () => {
    await expect(loadStats(api, "high-risk")).rejects.toThrow(/no ratings/);
  });
});
