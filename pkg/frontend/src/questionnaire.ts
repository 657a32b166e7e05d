/** Questionnaire session: walks a rater through the server-selected sample
 * list, maps the two questions (understandable? same meaning?) to the three
 * rating categories, and posts one rating per sample. */

import { ApiClient, ApiError, type RatingCategory } from "./api.js";

export interface QuestionAnswers {
  understandable: boolean;
  sameMeaning?: boolean;
}

/** The second question is only asked when the text was understandable. */
export function categoryFromAnswers(answers: QuestionAnswers): RatingCategory {
  if (!answers.understandable) return "not-understandable";
  if (answers.sameMeaning === undefined) {
    throw new Error("sameMeaning answer required for understandable text");
  }
  return answers.sameMeaning ? "same-meaning" : "changed-meaning";
}

export type RateOutcome = "posted" | "duplicate";

export class QuestionnaireSession {
  keys: string[] = [];
  index = 0;
  counts: Record<RatingCategory, number> = {
    "same-meaning": 0,
    "changed-meaning": 0,
    "not-understandable": 0,
  };
  duplicates = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly rater: string,
    private readonly part: string,
  ) {}

  async load(size?: number): Promise<void> {
    const resp = await this.api.questionnaire(this.part, size);
    this.keys = resp.samples;
    this.index = 0;
  }

  get currentKey(): string | null {
    return this.index < this.keys.length ? this.keys[this.index] : null;
  }

  get done(): boolean {
    return this.index >= this.keys.length;
  }

  get posted(): number {
    return (
      this.counts["same-meaning"] +
      this.counts["changed-meaning"] +
      this.counts["not-understandable"]
    );
  }

  async rate(answers: QuestionAnswers): Promise<RateOutcome> {
    const key = this.currentKey;
    if (key === null) throw new Error("questionnaire already complete");
    const category = categoryFromAnswers(answers);
    try {
      await this.api.rate({
        rater: this.rater,
        sample: key,
        category,
        part: this.part,
      });
    } catch (err) {
      if (err instanceof ApiError && err.isConflict) {
        // Already rated (for example in a previous session): surface it and
        // move to the next sample.
        this.duplicates += 1;
        this.index += 1;
        return "duplicate";
      }
      throw err;
    }
    this.counts[category] += 1;
    this.index += 1;
    return "posted";
  }

  /** The rater's own tallies for the completion screen. */
  summary(): { total: number; counts: Record<RatingCategory, number> } {
    return { total: this.posted, counts: { ...this.counts } };
  }
}
