/** Wire types for the annotation JSON API. */

export const ROLES = [
  "feature_requester",
  "bug_reporter",
  "complainer",
  "praiser",
  "quality_issue_raiser",
  "dispraiser",
  "subsequent_feature_requester",
  "questioner",
] as const;

export type Role = (typeof ROLES)[number];
export type Relevance = "relevant" | "irrelevant";

export interface NoteContext {
  note_id: string;
  text: string;
  released_at: string;
  version: string | null;
}

export interface ReviewContext {
  review_id: string;
  text: string;
  posted_at: string;
  rating: number | null;
  full_text: string | null;
}

export interface PairView {
  pair_id: string;
  rn_sentence_id: string;
  ur_sentence_id: string;
  sims: Record<string, number>;
  ranks: Record<string, number>;
  in_intersection: boolean;
  app_id?: string;
  note?: NoteContext;
  review?: ReviewContext;
  delta_days: number | null;
}

export interface PairsPage {
  pairs: PairView[];
  total_matching: number;
}

export interface LabelSubmission {
  pair_id: string;
  annotator: string;
  relevance: Relevance;
  role: Role | null;
}

export interface LabelRecord extends LabelSubmission {
  labeled_at: string;
}

export interface Progress {
  labeled: number;
  total: number;
  per_annotator: Record<string, number>;
}

export interface Disagreement {
  pair_id: string;
  labels: Record<string, LabelRecord>;
  adjudicated: boolean;
}

export interface AgreementReport {
  annotators: [string, string];
  pairs_compared: number;
  percent_agreement: number;
  cohen_kappa: number;
  disagreements: Disagreement[];
}

export function isRole(value: string): value is Role {
  return (ROLES as readonly string[]).includes(value);
}
