/** The refine panel: pull suggestions, edit the candidate, request a
 * data-map estimate, and submit once an estimate exists.
 *
 * Submission stays disabled until the server has produced at least one
 * estimate for the draft; an easy-to-learn estimate (or submit response)
 * raises the warning banner but never blocks. Only one estimate request may
 * be in flight at a time. API errors land in the inline error line, never
 * in the console alone.
 */

import { ApiError, WorkbenchApi } from "./api.js";
import type { DccSummary, NliLabel, SuggestionEntry } from "./types.js";

const LABELS: NliLabel[] = ["entailment", "neutral", "contradiction"];

export class RefinePanel {
  readonly root: HTMLElement;

  private draftId: string | null = null;
  private usedFingerprint: string | null = null;
  private origin: "llm_suggestion" | "manual" = "manual";
  private pending = false;
  private hasEstimate = false;

  private suggestionList!: HTMLElement;
  private premiseInput!: HTMLTextAreaElement;
  private hypothesisInput!: HTMLTextAreaElement;
  private labelSelect!: HTMLSelectElement;
  private estimateButton!: HTMLButtonElement;
  private submitButton!: HTMLButtonElement;
  private suggestButton!: HTMLButtonElement;
  private gauge!: HTMLElement;
  private warningBanner!: HTMLElement;
  private errorLine!: HTMLElement;
  private statusLine!: HTMLElement;

  constructor(
    container: HTMLElement,
    private readonly api: WorkbenchApi,
    private readonly dcc: DccSummary,
    private readonly onDraftChange: (draftId: string | null) => void = () => {},
  ) {
    this.root = container;
    this.render();
  }

  private render(): void {
    this.root.textContent = "";

    const suggestWrap = document.createElement("div");
    suggestWrap.className = "suggest-wrap";
    this.suggestButton = document.createElement("button");
    this.suggestButton.className = "suggest-button";
    this.suggestButton.textContent = "Get suggestions";
    this.suggestButton.addEventListener("click", () => void this.fetchSuggestions(3));
    this.suggestionList = document.createElement("div");
    this.suggestionList.className = "suggestion-list";
    suggestWrap.append(this.suggestButton, this.suggestionList);

    const form = document.createElement("div");
    form.className = "draft-form";
    this.premiseInput = document.createElement("textarea");
    this.premiseInput.className = "premise-input";
    this.premiseInput.value = this.dcc.premise;
    this.hypothesisInput = document.createElement("textarea");
    this.hypothesisInput.className = "hypothesis-input";
    this.hypothesisInput.value = this.dcc.hypothesis;
    this.labelSelect = document.createElement("select");
    this.labelSelect.className = "label-select";
    for (const label of LABELS) {
      const option = document.createElement("option");
      option.value = label;
      option.textContent = label;
      if (label === this.dcc.gold_label) option.selected = true;
      this.labelSelect.appendChild(option);
    }
    const premiseLabel = document.createElement("label");
    premiseLabel.textContent = "Premise";
    const hypothesisLabel = document.createElement("label");
    hypothesisLabel.textContent = "Hypothesis";
    const labelLabel = document.createElement("label");
    labelLabel.textContent = "Label";
    form.append(
      premiseLabel, this.premiseInput,
      hypothesisLabel, this.hypothesisInput,
      labelLabel, this.labelSelect,
    );

    const actions = document.createElement("div");
    actions.className = "actions";
    this.estimateButton = document.createElement("button");
    this.estimateButton.className = "estimate-button";
    this.estimateButton.textContent = "Estimate map location";
    this.estimateButton.addEventListener("click", () => void this.estimate());
    this.submitButton = document.createElement("button");
    this.submitButton.className = "submit-button";
    this.submitButton.textContent = "Submit counterfactual";
    this.submitButton.disabled = true;
    this.submitButton.addEventListener("click", () => void this.submitDraft());
    actions.append(this.estimateButton, this.submitButton);

    this.gauge = document.createElement("div");
    this.gauge.className = "estimate-gauge empty";
    this.warningBanner = document.createElement("div");
    this.warningBanner.className = "warning-banner hidden";
    this.warningBanner.textContent =
      "Estimate landed in the easy-to-learn region: consider revising before submitting.";
    this.errorLine = document.createElement("div");
    this.errorLine.className = "error-line";
    this.statusLine = document.createElement("div");
    this.statusLine.className = "status-line";

    this.root.append(
      suggestWrap, form, actions, this.gauge, this.warningBanner,
      this.errorLine, this.statusLine,
    );
  }

  // -- helpers ----------------------------------------------------------

  private setPending(pending: boolean): void {
    this.pending = pending;
    this.estimateButton.disabled = pending;
    this.suggestButton.disabled = pending;
    this.submitButton.disabled = pending || !this.hasEstimate;
  }

  private showError(error: unknown): void {
    if (error instanceof ApiError) {
      this.errorLine.textContent = `${error.kind}: ${error.message}`;
    } else {
      this.errorLine.textContent = String(error);
    }
  }

  private fields(): { premise: string; hypothesis: string; user_label: NliLabel } {
    return {
      premise: this.premiseInput.value,
      hypothesis: this.hypothesisInput.value,
      user_label: this.labelSelect.value as NliLabel,
    };
  }

  // -- actions ----------------------------------------------------------

  useSuggestion(suggestion: SuggestionEntry): void {
    this.premiseInput.value = suggestion.premise;
    this.hypothesisInput.value = suggestion.hypothesis;
    this.usedFingerprint = suggestion.prompt_fingerprint;
    this.origin = "llm_suggestion";
    this.statusLine.textContent = "Suggestion loaded; label it, then estimate.";
  }

  async fetchSuggestions(n: number): Promise<void> {
    if (this.pending) return;
    this.setPending(true);
    this.errorLine.textContent = "";
    try {
      const response = await this.api.suggest(this.dcc.id, n);
      this.suggestionList.textContent = "";
      for (const suggestion of response.suggestions) {
        const card = document.createElement("div");
        card.className = "suggestion-card";
        const text = document.createElement("span");
        text.textContent = `${suggestion.premise} → ${suggestion.hypothesis}`;
        const use = document.createElement("button");
        use.className = "use-suggestion";
        use.textContent = "Use";
        use.addEventListener("click", () => this.useSuggestion(suggestion));
        card.append(text, use);
        this.suggestionList.appendChild(card);
      }
      for (const failure of response.failures) {
        const card = document.createElement("div");
        card.className = "suggestion-card unparseable";
        card.textContent = `Unparseable completion: ${failure.raw_completion}`;
        this.suggestionList.appendChild(card);
      }
    } catch (error) {
      this.showError(error);
    } finally {
      this.setPending(false);
    }
  }

  async estimate(): Promise<void> {
    if (this.pending) return;
    this.setPending(true);
    this.errorLine.textContent = "";
    try {
      if (this.draftId === null) {
        const draft = await this.api.createDraft({
          seed_dcc_id: this.dcc.id,
          ...this.fields(),
          origin: this.origin,
          suggestion_fingerprint: this.usedFingerprint,
        });
        this.draftId = draft.draft_id;
        this.onDraftChange(this.draftId);
      }
      const response = await this.api.estimate(this.draftId, this.fields());
      this.hasEstimate = true;
      const estimate = response.estimate;
      this.gauge.classList.remove("empty");
      this.gauge.textContent =
        `confidence ${estimate.confidence.toFixed(3)} · ` +
        `variability ${estimate.variability.toFixed(3)} · ${estimate.region}`;
      this.gauge.dataset.region = estimate.region;
      this.warningBanner.classList.toggle(
        "hidden", estimate.region !== "easy_to_learn",
      );
      this.statusLine.textContent =
        `Estimates so far: ${response.draft.estimate_history.length}`;
    } catch (error) {
      this.showError(error);
    } finally {
      this.setPending(false);
    }
  }

  async submitDraft(): Promise<void> {
    if (this.pending || this.draftId === null || !this.hasEstimate) return;
    this.setPending(true);
    this.errorLine.textContent = "";
    try {
      const response = await this.api.submit(this.draftId);
      this.warningBanner.classList.toggle("hidden", !response.warning_easy_to_learn);
      this.statusLine.textContent = `Submitted as ${response.draft.draft_id}.`;
      this.submitButton.textContent = "Submitted";
      this.hasEstimate = false; // a new draft is needed for further submissions
      this.draftId = null;
      this.onDraftChange(null);
    } catch (error) {
      this.showError(error);
    } finally {
      this.setPending(false);
      this.submitButton.disabled = true;
    }
  }

  // test hooks
  get submitDisabled(): boolean {
    return this.submitButton.disabled;
  }

  get estimateDisabled(): boolean {
    return this.estimateButton.disabled;
  }
}
