/** Adjudication: list the pairs the two coders disagree on, capture the
 * adjudicator's decision, and drop each pair from the view once decided.
 */
export const ADJUDICATOR = "adjudicator";
export class AdjudicationView {
    api;
    options;
    open = [];
    annotators = null;
    constructor(api, options = {}) {
        this.api = api;
        this.options = options;
    }
    items() {
        return this.open;
    }
    async load() {
        const report = await this.api.agreement(this.options.a, this.options.b);
        this.annotators = report.annotators;
        const pending = report.disagreements.filter((d) => !d.adjudicated);
        this.open = await Promise.all(pending.map(async (disagreement) => ({
            disagreement,
            pair: await this.api.getPair(disagreement.pair_id).catch(() => null),
        })));
    }
    async decide(pairId, relevance, role) {
        await this.api.submitLabel({
            pair_id: pairId,
            annotator: ADJUDICATOR,
            relevance,
            role: relevance === "relevant" ? role : null,
        });
        this.open = this.open.filter((item) => item.disagreement.pair_id !== pairId);
    }
}
