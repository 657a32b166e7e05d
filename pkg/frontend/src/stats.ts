/** Admin stats page: fetches /api/stats and renders it verbatim — every
 * number shown comes straight from the API response. */

import { ApiClient, type RatingStats } from "./api.js";

export interface StatsRow {
  label: string;
  value: string;
}

export function statsRows(stats: RatingStats): StatsRow[] {
  const rows: StatsRow[] = [
    { label: "Part", value: stats.part },
    { label: "Samples", value: String(stats.n_samples) },
    { label: "Raters", value: String(stats.n_raters) },
  ];
  for (const [category, pct] of Object.entries(stats.percent)) {
    rows.push({ label: category, value: `${pct.toFixed(1)}%` });
  }
  rows.push({ label: "Ties", value: `${stats.tie_percent.toFixed(1)}%` });
  rows.push({
    label: "Fleiss kappa",
    value: stats.kappa === null ? "undefined" : String(stats.kappa),
  });
  rows.push({ label: "Agreement band", value: stats.band });
  return rows;
}

export async function loadStats(
  api: ApiClient,
  part: string,
): Promise<{ stats: RatingStats; rows: StatsRow[] }> {
  const stats = await api.stats(part);
  return { stats, rows: statsRows(stats) };
}
