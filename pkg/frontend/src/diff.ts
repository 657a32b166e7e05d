/** Diff rendering: turn the server's per-field character spans into
 * highlight segments whose changed ranges exactly cover the recorded
 * spans — no re-diffing happens client-side. */

import type { DiffSpan } from "./api.js";

export interface Segment {
  text: string;
  changed: boolean;
  op?: DiffSpan["op"];
}

function cut(
  text: string,
  ranges: { start: number; end: number; op: DiffSpan["op"] }[],
): Segment[] {
  const ordered = [...ranges].sort((a, b) => a.start - b.start);
  const segments: Segment[] = [];
  let pos = 0;
  for (const r of ordered) {
    if (r.start < pos || r.end > text.length) {
      throw new Error(`diff span [${r.start},${r.end}) out of bounds`);
    }
    if (r.start > pos) {
      segments.push({ text: text.slice(pos, r.start), changed: false });
    }
    // Zero-width spans (pure insertion on the other side) still produce a
    // marker segment so the location of the edit stays visible.
    segments.push({ text: text.slice(r.start, r.end), changed: true, op: r.op });
    pos = r.end;
  }
  if (pos < text.length) {
    segments.push({ text: text.slice(pos), changed: false });
  }
  return segments;
}

/** Segments of the noisy text; spans of op "delete" are zero-width here. */
export function noisySegments(noisy: string, spans: DiffSpan[]): Segment[] {
  return cut(
    noisy,
    spans.map((s) => ({ start: s.noisy_start, end: s.noisy_end, op: s.op })),
  );
}

/** Segments of the original text; spans of op "insert" are zero-width here. */
export function originalSegments(
  original: string,
  spans: DiffSpan[],
): Segment[] {
  return cut(
    original,
    spans.map((s) => ({
      start: s.original_start,
      end: s.original_end,
      op: s.op,
    })),
  );
}

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function toHtml(segments: Segment[], changedClass: string): string {
  return segments
    .map((seg) => {
      if (!seg.changed) return escapeHtml(seg.text);
      const cls = `${changedClass} op-${seg.op ?? "replace"}`;
      const body = seg.text === "" ? "∅" : escapeHtml(seg.text);
      return `<mark class="${cls}">${body}</mark>`;
    })
    .join("");
}

export function renderOriginalHtml(original: string, spans: DiffSpan[]): string {
  return toHtml(originalSegments(original, spans), "diff-removed");
}

export function renderNoisyHtml(noisy: string, spans: DiffSpan[]): string {
  return toHtml(noisySegments(noisy, spans), "diff-added");
}
