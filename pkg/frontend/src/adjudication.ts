/** Adjudication: list the pairs the two coders disagree on, capture the
 * adjudicator's decision, and drop each pair from the view once decided.
 */

import { ApiClient } from "./api.js";
import type { Disagreement, PairView, Relevance, Role } from "./types.js";

export const ADJUDICATOR = "adjudicator";

export interface AdjudicationItem {
  disagreement: Disagreement;
  pair: PairView | null;
}

export class AdjudicationView {
  private open: AdjudicationItem[] = [];
  annotators: [string, string] | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly options: { a?: string; b?: string } = {},
  ) {}

  items(): readonly AdjudicationItem[] {
    return this.open;
  }

  async load(): Promise<void> {
    const report = await this.api.agreement(this.options.a, this.options.b);
    this.annotators = report.annotators;
    const pending = report.disagreements.filter((d) => !d.adjudicated);
    this.open = await Promise.all(
      pending.map(async (disagreement) => ({
        disagreement,
        pair: await this.api.getPair(disagreement.pair_id).catch(() => null),
      })),
    );
  }

  async decide(pairId: string, relevance: Relevance, role: Role | null): Promise<void> {
    await this.api.submitLabel({
      pair_id: pairId,
      annotator: ADJUDICATOR,
      relevance,
      role: relevance === "relevant" ? role : null,
    });
    this.open = this.open.filter((item) => item.disagreement.pair_id !== pairId);
  }
}
