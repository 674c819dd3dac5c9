/** Dashboard wiring: understand -> diagnose -> refine.
 *
 * Landing shows the data map plus the mined DCC list (understand). One
 * click on a DCC opens diagnosis (both neighbor boxes); one more click
 * opens the refine panel. All truth comes from the API.
 */

import { ApiError, WorkbenchApi } from "./api.js";
import { renderDataMap } from "./scatter.js";
import { renderNeighborBoxes } from "./neighbors.js";
import { RefinePanel } from "./refine.js";
import {
  initialState,
  selectDcc,
  setDraft,
  showPanel,
  type Panel,
  type ViewState,
} from "./state.js";
import type { DataMapResponse, DccListResponse } from "./types.js";

const PANELS: Panel[] = ["understand", "diagnose", "refine"];

export class Dashboard {
  private state: ViewState = initialState();
  private dataMap: DataMapResponse | null = null;
  private dccList: DccListResponse | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: WorkbenchApi = new WorkbenchApi(),
  ) {}

  async start(): Promise<void> {
    try {
      [this.dataMap, this.dccList] = await Promise.all([
        this.api.dataMap(),
        this.api.dccList(),
      ]);
    } catch (error) {
      const line = this.root.querySelector<HTMLElement>("#global-error");
      if (line) {
        line.textContent =
          error instanceof ApiError ? `${error.kind}: ${error.message}` : String(error);
      }
      return;
    }
    this.renderTabs();
    this.renderUnderstand();
    this.applyPanel();
  }

  private renderTabs(): void {
    const nav = this.root.querySelector<HTMLElement>("#tabs");
    if (!nav) return;
    nav.textContent = "";
    for (const panel of PANELS) {
      const button = document.createElement("button");
      button.className = `tab tab-${panel}`;
      button.textContent = panel;
      button.addEventListener("click", () => {
        this.state = showPanel(this.state, panel);
        this.applyPanel();
      });
      nav.appendChild(button);
    }
  }

  private applyPanel(): void {
    for (const panel of PANELS) {
      const section = this.root.querySelector<HTMLElement>(`#panel-${panel}`);
      if (section) section.classList.toggle("hidden", this.state.panel !== panel);
      const tab = this.root.querySelector<HTMLElement>(`.tab-${panel}`);
      if (tab) tab.classList.toggle("active", this.state.panel === panel);
    }
  }

  private renderUnderstand(): void {
    if (!this.dataMap || !this.dccList) return;
    const mapContainer = this.root.querySelector<HTMLElement>("#datamap");
    if (mapContainer) {
      renderDataMap(mapContainer, this.dataMap.points, {
        selection: this.state.selectedDcc,
        viewport: this.state.viewport,
        onSelect: (point) => void this.openDcc(point.id),
      });
    }
    const list = this.root.querySelector<HTMLElement>("#dcc-list");
    if (list) {
      list.textContent = "";
      for (const dcc of this.dccList.dccs) {
        const item = document.createElement("button");
        item.className = "dcc-item";
        item.dataset.id = dcc.id;
        item.textContent =
          `${dcc.id} · ${dcc.region} · conf ${dcc.confidence.toFixed(3)}`;
        item.addEventListener("click", () => void this.openDcc(dcc.id));
        list.appendChild(item);
      }
      if (this.dccList.dccs.length === 0) {
        const empty = document.createElement("p");
        empty.className = "empty-state";
        empty.textContent = "No DCCs under the current mining configuration.";
        list.appendChild(empty);
      }
    }
    const exportLink = this.root.querySelector<HTMLAnchorElement>("#export-link");
    if (exportLink) exportLink.href = this.api.exportUrl();
  }

  async openDcc(id: string): Promise<void> {
    this.state = selectDcc(this.state, id);
    this.renderUnderstand(); // restyle the selected marker
    const detailContainer = this.root.querySelector<HTMLElement>("#neighbor-boxes");
    const refineContainer = this.root.querySelector<HTMLElement>("#refine-root");
    try {
      const detail = await this.api.dccDetail(id);
      if (detailContainer) renderNeighborBoxes(detailContainer, detail);
      if (refineContainer) {
        new RefinePanel(refineContainer, this.api, detail, (draftId) => {
          this.state = setDraft(this.state, draftId);
        });
      }
    } catch (error) {
      const line = this.root.querySelector<HTMLElement>("#global-error");
      if (line) {
        line.textContent =
          error instanceof ApiError ? `${error.kind}: ${error.message}` : String(error);
      }
      return;
    }
    this.applyPanel();
  }
}

declare global {
  interface Window {
    dashboard?: Dashboard;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const dashboard = new Dashboard(document.getElementById("app")!);
  window.dashboard = dashboard;
  void dashboard.start();
}
