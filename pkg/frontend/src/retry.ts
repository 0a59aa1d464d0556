/** Local retry queue so a network failure never silently drops a label.
 *
 * A submission travels one of four paths: delivered (2xx), duplicate (409,
 * someone - possibly an earlier lost-response retry of ours - already
 * labeled it), rejected (4xx validation, retrying would never help), or
 * queued (network failure; the label stays in `pending` until a flush
 * delivers it).
 */

import { ApiError, NetworkError } from "./api.js";
import type { LabelRecord, LabelSubmission } from "./types.js";

export type SubmitStatus = "delivered" | "duplicate" | "rejected" | "queued";

export interface SubmitOutcome {
  status: SubmitStatus;
  error?: string;
}

export interface FlushReport {
  delivered: number;
  duplicates: number;
  rejected: { label: LabelSubmission; error: string }[];
  remaining: number;
}

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

export class RetryQueue {
  readonly pending: LabelSubmission[] = [];

  constructor(
    private readonly post: (label: LabelSubmission) => Promise<{ label: LabelRecord }>,
    private readonly options: { maxAttempts?: number; delayMs?: number } = {},
  ) {}

  get size(): number {
    return this.pending.length;
  }

  async submit(label: LabelSubmission): Promise<SubmitOutcome> {
    try {
      await this.post(label);
      return { status: "delivered" };
    } catch (err) {
      if (err instanceof ApiError) {
        if (err.status === 409) return { status: "duplicate" };
        return { status: "rejected", error: err.message };
      }
      if (err instanceof NetworkError) {
        this.pending.push(label);
        return { status: "queued" };
      }
      throw err;
    }
  }

  /** Retry everything in `pending`, in order. Labels leave the queue only
   * once delivered (or already recorded server-side); a label that keeps
   * hitting network failures stays queued for the next flush. */
  async flush(): Promise<FlushReport> {
    const maxAttempts = this.options.maxAttempts ?? 5;
    const delayMs = this.options.delayMs ?? 50;
    const report: FlushReport = { delivered: 0, duplicates: 0, rejected: [], remaining: 0 };

    const queue = this.pending.splice(0);
    for (const label of queue) {
      let settled = false;
      for (let attempt = 1; attempt <= maxAttempts && !settled; attempt++) {
        try {
          await this.post(label);
          report.delivered += 1;
          settled = true;
        } catch (err) {
          if (err instanceof ApiError && err.status === 409) {
            report.duplicates += 1;
            settled = true;
          } else if (err instanceof ApiError) {
            report.rejected.push({ label, error: err.message });
            settled = true;
          } else if (err instanceof NetworkError && attempt < maxAttempts) {
            await sleep(delayMs * attempt);
          } else if (err instanceof NetworkError) {
            this.pending.push(label); // keep it; never silent loss
          } else {
            throw err;
          }
        }
      }
    }
    report.remaining = this.pending.length;
    return report;
  }
}
