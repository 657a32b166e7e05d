/** DOM wiring: hash-routed single-page app with three views (review,
 * questionnaire, stats). All state mutations go through the ApiClient. */

import { ApiClient, type SampleView } from "./api.js";
import { renderNoisyHtml, renderOriginalHtml } from "./diff.js";
import { categoryFromAnswers, QuestionnaireSession } from "./questionnaire.js";
import { labelEditorFor, ReviewSession } from "./review.js";
import { loadStats } from "./stats.js";

const api = new ApiClient("");
const root = document.getElementById("app") as HTMLElement;

function el(html: string): HTMLElement {
  const template = document.createElement("template");
  template.innerHTML = html.trim();
  return template.content.firstElementChild as HTMLElement;
}

function askName(storageKey: string, prompt_: string): string {
  let name = localStorage.getItem(storageKey) ?? "";
  while (!name) {
    name = window.prompt(prompt_) ?? "";
  }
  localStorage.setItem(storageKey, name);
  return name;
}

// ---------------------------------------------------------------------------
// Review view

function renderSample(view: SampleView): HTMLElement {
  const fields = Object.keys(view.noisy)
    .map((field) => {
      const spans = view.diff[field] ?? [];
      const original = view.original[field] ?? "";
      const noisy = view.noisy[field];
      return `
        <div class="field">
          <h3>${field}</h3>
          <p class="original">${renderOriginalHtml(original, spans)}</p>
          <p class="noisy">${renderNoisyHtml(noisy, spans)}</p>
        </div>`;
    })
    .join("");
  return el(`
    <div class="sample">
      <div class="meta">
        <span>${view.id}</span> <span>${view.task}</span>
        <span>${view.method}</span>
        <span class="gold">gold: ${JSON.stringify(view.gold_label)}</span>
      </div>
      ${fields}
    </div>`);
}

async function collectLabel(view: SampleView): Promise<unknown | undefined> {
  const editor = labelEditorFor(view);
  if (editor.kind === "class-picker") {
    const hint = editor.options.length
      ? ` (${editor.options.join(" / ")})`
      : "";
    const answer = window.prompt(`New label${hint}:`);
    return answer === null || answer === "" ? undefined : answer;
  }
  if (editor.kind === "score-slider") {
    const answer = window.prompt(
      `New score (${editor.min}-${editor.max}):`,
    );
    if (answer === null || answer === "") return undefined;
    return Number(answer);
  }
  const answer = window.prompt(
    `New BIO tags for ${editor.tokens.length} tokens (space-separated):`,
  );
  return answer === null || answer === "" ? undefined : answer.split(/\s+/);
}

async function showReview(): Promise<void> {
  const reviewer = askName("reviewer", "Reviewer name:");
  const session = new ReviewSession(api, reviewer);
  await session.load();

  const render = async (): Promise<void> => {
    root.replaceChildren();
    const progress = await session.progress();
    const bar =
      progress === null
        ? ""
        : `<progress max="${progress.target}" value="${progress.count}">
           </progress> <span>${progress.count}/${progress.target}</span>`;
    root.append(
      el(`<header>
            <h2>Review queue (${session.remaining} pending)</h2>
            <div class="progress">${bar}</div>
            <p class="hint">a = accept, r = relabel, x = exclude</p>
          </header>`),
    );
    if (session.current === null) {
      root.append(el(`<p class="empty">Queue is empty — all done.</p>`));
      return;
    }
    root.append(renderSample(session.current));
    const buttons = el(`
      <div class="actions">
        <button data-key="a">Accept (a)</button>
        <button data-key="r">Relabel (r)</button>
        <button data-key="x">Exclude (x)</button>
      </div>`);
    buttons.querySelectorAll("button").forEach((button) => {
      button.addEventListener("click", () =>
        onKey(button.dataset.key as string),
      );
    });
    root.append(buttons);
  };

  const onKey = async (key: string): Promise<void> => {
    if (session.current === null) return;
    let revised: unknown | undefined;
    if (key === "r") {
      revised = await collectLabel(session.current);
      if (revised === undefined) return;
    }
    const outcome = await session.handleKey(key, revised);
    if (outcome === "queued-retry") {
      void session.retry();
    }
    await render();
  };

  const keyListener = (event: KeyboardEvent): void => {
    if (event.target instanceof HTMLInputElement) return;
    if (event.key in { a: 1, r: 1, x: 1 }) void onKey(event.key);
  };
  document.addEventListener("keydown", keyListener);
  window.addEventListener("hashchange", () =>
    document.removeEventListener("keydown", keyListener),
  );
  await render();
}

// ---------------------------------------------------------------------------
// Questionnaire view

async function showQuestionnaire(): Promise<void> {
  const rater = askName("rater", "Rater id:");
  const part =
    window.location.hash === "#questionnaire-high" ? "high-risk" : "low-risk";
  const session = new QuestionnaireSession(api, rater, part);
  await session.load();

  const render = async (): Promise<void> => {
    root.replaceChildren();
    if (session.done) {
      const summary = session.summary();
      root.append(
        el(`<div class="summary">
              <h2>Questionnaire complete</h2>
              <p>${summary.total} ratings posted
                 (${session.duplicates} already rated).</p>
              <ul>
                <li>same meaning: ${summary.counts["same-meaning"]}</li>
                <li>changed meaning: ${summary.counts["changed-meaning"]}</li>
                <li>not understandable:
                    ${summary.counts["not-understandable"]}</li>
              </ul>
            </div>`),
      );
      return;
    }
    const key = session.currentKey as string;
    const view = await api.sample(key);
    root.append(
      el(`<header><h2>Sample ${session.index + 1} / ${session.keys.length}
          </h2></header>`),
    );
    root.append(renderSample(view));
    const form = el(`
      <div class="questions">
        <p>Is the text understandable?</p>
        <button data-answer="not-understandable">No</button>
        <p>Does it keep the same meaning?</p>
        <button data-answer="same-meaning">Yes, same meaning</button>
        <button data-answer="changed-meaning">No, meaning changed</button>
      </div>`);
    form.querySelectorAll("button").forEach((button) => {
      button.addEventListener("click", async () => {
        const answer = button.dataset.answer;
        await session.rate(
          answer === "not-understandable"
            ? { understandable: false }
            : { understandable: true, sameMeaning: answer === "same-meaning" },
        );
        await render();
      });
    });
    root.append(form);
  };
  await render();
}

// ---------------------------------------------------------------------------
// Stats view

async function showStats(): Promise<void> {
  const part = window.location.hash === "#stats-high" ? "high-risk" : "low-risk";
  root.replaceChildren(el(`<p>Loading stats…</p>`));
  const { rows } = await loadStats(api, part);
  const table = rows
    .map(
      (row) =>
        `<tr><th>${row.label}</th><td>${row.value}</td></tr>`,
    )
    .join("");
  root.replaceChildren(
    el(`<div class="stats"><h2>Questionnaire statistics</h2>
        <table>${table}</table></div>`),
  );
}

// ---------------------------------------------------------------------------
// Router

async function route(): Promise<void> {
  const hash = window.location.hash || "#review";
  try {
    if (hash.startsWith("#questionnaire")) await showQuestionnaire();
    else if (hash.startsWith("#stats")) await showStats();
    else await showReview();
  } catch (err) {
    root.replaceChildren(
      el(`<p class="error">${err instanceof Error ? err.message : err}</p>`),
    );
  }
}

window.addEventListener("hashchange", () => void route());
void route();

// Mapping of the two questionnaire buttons to categories is re-exported for
// completeness; the session module owns the logic.
export { categoryFromAnswers };
