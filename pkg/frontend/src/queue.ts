/** Sequential labeling queue: fetch the next unlabeled pair, capture a
 * relevance + role decision, POST it, advance. The role picker is only
 * enabled while the relevance toggle says relevant, mirroring the server's
 * label invariant. Undo re-opens the last submitted pair for review; the
 * server's (pair, annotator) uniqueness makes a resubmission a duplicate.
 */

import { ApiClient } from "./api.js";
import { RetryQueue, SubmitOutcome } from "./retry.js";
import type { LabelSubmission, PairView, Relevance, Role } from "./types.js";

export type QueuePhase = "idle" | "loading" | "ready" | "reviewing" | "done" | "error";

export interface Selection {
  relevance: Relevance | null;
  role: Role | null;
}

export interface QueueState {
  phase: QueuePhase;
  pair: PairView | null;
  selection: Selection;
  remaining: number;
  submitted: number;
  queuedOffline: number;
  message: string | null;
}

export interface QueueOptions {
  app?: string;
  inIntersectionOnly?: boolean;
  retry?: RetryQueue;
}

type Listener = (state: QueueState) => void;

export class LabelingQueue {
  readonly retry: RetryQueue;
  private readonly listeners: Listener[] = [];
  private lastSubmitted: { pair: PairView; selection: Selection } | null = null;

  state: QueueState = {
    phase: "idle",
    pair: null,
    selection: { relevance: null, role: null },
    remaining: 0,
    submitted: 0,
    queuedOffline: 0,
    message: null,
  };

  constructor(
    private readonly api: ApiClient,
    readonly annotator: string,
    private readonly options: QueueOptions = {},
  ) {
    this.retry = options.retry ?? new RetryQueue((label) => api.submitLabel(label));
  }

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(update: Partial<QueueState>): void {
    this.state = { ...this.state, ...update };
    for (const listener of this.listeners) listener(this.state);
  }

  async start(): Promise<void> {
    await this.loadNext();
  }

  async loadNext(): Promise<void> {
    this.emit({ phase: "loading", message: null });
    try {
      const page = await this.api.nextPairs(this.annotator, {
        limit: 1,
        app: this.options.app,
        inIntersectionOnly: this.options.inIntersectionOnly,
      });
      const pair = page.pairs[0] ?? null;
      this.emit({
        phase: pair ? "ready" : "done",
        pair,
        selection: { relevance: null, role: null },
        remaining: page.total_matching,
      });
    } catch (err) {
      this.emit({ phase: "error", message: String(err) });
    }
  }

  roleEnabled(): boolean {
    return this.state.selection.relevance === "relevant";
  }

  setRelevance(relevance: Relevance): void {
    const role = relevance === "relevant" ? this.state.selection.role : null;
    this.emit({ selection: { relevance, role }, message: null });
  }

  setRole(role: Role): boolean {
    if (!this.roleEnabled()) return false; // picker is disabled until relevant
    this.emit({ selection: { ...this.state.selection, role } });
    return true;
  }

  canSubmit(): boolean {
    return (
      (this.state.phase === "ready" || this.state.phase === "reviewing") &&
      this.state.pair !== null &&
      this.state.selection.relevance !== null
    );
  }

  buildSubmission(): LabelSubmission {
    const { pair, selection } = this.state;
    if (!pair || !selection.relevance) throw new Error("nothing to submit");
    return {
      pair_id: pair.pair_id,
      annotator: this.annotator,
      relevance: selection.relevance,
      // the client-side guard: a role never rides on an irrelevant label
      role: selection.relevance === "relevant" ? selection.role : null,
    };
  }

  async submit(): Promise<SubmitOutcome> {
    if (!this.canSubmit()) return { status: "rejected", error: "no relevance selected" };
    const pair = this.state.pair as PairView;
    const outcome = await this.retry.submit(this.buildSubmission());
    if (outcome.status === "rejected") {
      // inline error; the pair stays open
      this.emit({ message: outcome.error ?? "rejected" });
      return outcome;
    }
    this.lastSubmitted = { pair, selection: { ...this.state.selection } };
    this.emit({
      submitted: this.state.submitted + 1,
      queuedOffline: this.retry.size,
    });
    await this.loadNext();
    return outcome;
  }

  /** Re-open the last submitted pair (read-back; a resubmission will 409). */
  undo(): boolean {
    if (!this.lastSubmitted) return false;
    this.emit({
      phase: "reviewing",
      pair: this.lastSubmitted.pair,
      selection: { ...this.lastSubmitted.selection },
      message: "already submitted; submitting again will be reported as a duplicate",
    });
    return true;
  }

  async flushOffline() {
    const report = await this.retry.flush();
    this.emit({ queuedOffline: this.retry.size });
    return report;
  }
}
