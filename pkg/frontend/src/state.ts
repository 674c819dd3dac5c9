/** Dashboard view state and its legal transitions.
 *
 * The refine panel is only reachable with a selected DCC, and the map
 * viewport never leaves variability x confidence = [0, 0.5] x [0, 1].
 */

export type Panel = "understand" | "diagnose" | "refine";

export interface Viewport {
  xMin: number; // variability
  xMax: number;
  yMin: number; // confidence
  yMax: number;
}

export const FULL_VIEWPORT: Viewport = { xMin: 0, xMax: 0.5, yMin: 0, yMax: 1 };

export interface ViewState {
  selectedDcc: string | null;
  viewport: Viewport;
  activeDraft: string | null;
  panel: Panel;
}

export function initialState(): ViewState {
  return {
    selectedDcc: null,
    viewport: { ...FULL_VIEWPORT },
    activeDraft: null,
    panel: "understand",
  };
}

export function clampViewport(v: Viewport): Viewport {
  const clamp = (value: number, lo: number, hi: number) =>
    Math.min(hi, Math.max(lo, value));
  const xMin = clamp(Math.min(v.xMin, v.xMax), 0, 0.5);
  const xMax = clamp(Math.max(v.xMin, v.xMax), 0, 0.5);
  const yMin = clamp(Math.min(v.yMin, v.yMax), 0, 1);
  const yMax = clamp(Math.max(v.yMin, v.yMax), 0, 1);
  // a degenerate viewport falls back to the full axes
  if (xMax - xMin <= 0 || yMax - yMin <= 0) return { ...FULL_VIEWPORT };
  return { xMin, xMax, yMin, yMax };
}

export function selectDcc(state: ViewState, id: string): ViewState {
  // selecting a DCC moves straight into diagnosis; the draft resets
  return { ...state, selectedDcc: id, activeDraft: null, panel: "diagnose" };
}

export function showPanel(state: ViewState, panel: Panel): ViewState {
  if (panel !== "understand" && state.selectedDcc === null) {
    // diagnose/refine need a selection; stay where we are
    return state;
  }
  return { ...state, panel };
}

export function setDraft(state: ViewState, draftId: string | null): ViewState {
  return { ...state, activeDraft: draftId };
}
