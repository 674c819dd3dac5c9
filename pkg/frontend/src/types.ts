/** Payload shapes of the workbench JSON API. */

export type NliLabel = "entailment" | "neutral" | "contradiction";

export type MapRegion = "easy_to_learn" | "ambiguous" | "hard_to_learn" | "other";

export interface DataMapPoint {
  id: string;
  confidence: number;
  variability: number;
  region: MapRegion;
  is_dcc: boolean;
  gold_label: NliLabel;
  premise: string;
  hypothesis: string;
}

export interface DataMapResponse {
  count: number;
  points: DataMapPoint[];
}

export interface DccSummary {
  id: string;
  premise: string;
  hypothesis: string;
  gold_label: NliLabel;
  confidence: number;
  variability: number;
  region: MapRegion;
  majority_fraction: number;
}

export interface DccListResponse {
  count: number;
  dccs: DccSummary[];
}

export interface NeighborEntry {
  id: string;
  similarity: number;
  label: NliLabel;
  premise: string;
  hypothesis: string;
  confidence: number;
  variability: number;
}

export interface DccDetail extends DccSummary {
  triggering_neighbors: NeighborEntry[];
  different_label_neighbors: NeighborEntry[];
  same_label_neighbors: NeighborEntry[];
}

export interface SuggestionEntry {
  premise: string;
  hypothesis: string;
  source: string;
  raw_completion: string;
  prompt_fingerprint: string;
}

export interface SuggestResponse {
  dcc_id: string;
  prompt: string;
  prompt_fingerprint: string;
  context_word: string;
  suggestions: SuggestionEntry[];
  failures: { raw_completion: string }[];
}

export interface LocationEstimate {
  confidence: number;
  variability: number;
  region: MapRegion;
  per_checkpoint: number[][];
}

export interface DraftState {
  draft_id: string;
  seed_dcc_id: string;
  premise: string;
  hypothesis: string;
  user_label: NliLabel;
  origin: "llm_suggestion" | "manual";
  suggestion_fingerprint: string | null;
  tags: string[];
  status: "draft" | "submitted";
  submit_warning: boolean;
  latest_estimate: LocationEstimate | null;
  edit_history: unknown[];
  estimate_history: LocationEstimate[];
}

export interface EstimateResponse {
  draft: DraftState;
  estimate: LocationEstimate;
}

export interface SubmitResponse {
  draft: DraftState;
  warning_easy_to_learn: boolean;
}
