/** SVG data-map scatter.
 *
 * x = variability, y = confidence. Marker shape encodes the gold label
 * (circle = entailment, triangle = neutral, square = contradiction), fill
 * encodes the region, DCCs carry a highlight ring, and the selected DCC is
 * drawn black on top. Hover shows premise / hypothesis / label.
 */

import type { DataMapPoint, NliLabel } from "./types.js";
import { clampViewport, type Viewport, FULL_VIEWPORT } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const WIDTH = 640;
export const HEIGHT = 480;
const MARGIN = { top: 16, right: 16, bottom: 42, left: 52 };

export interface ScatterOptions {
  selection?: string | null;
  viewport?: Viewport;
  onSelect?: (point: DataMapPoint) => void;
}

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
  return el;
}

function markerFor(label: NliLabel, x: number, y: number): SVGElement {
  switch (label) {
    case "entailment":
      return svgElement("circle", { cx: String(x), cy: String(y), r: "4" });
    case "neutral": {
      const points = `${x},${y - 5} ${x - 4.5},${y + 4} ${x + 4.5},${y + 4}`;
      return svgElement("polygon", { points });
    }
    case "contradiction":
      return svgElement("rect", {
        x: String(x - 3.5),
        y: String(y - 3.5),
        width: "7",
        height: "7",
      });
  }
}

function axis(svg: SVGSVGElement, viewport: Viewport): void {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const frame = svgElement("rect", {
    x: String(MARGIN.left),
    y: String(MARGIN.top),
    width: String(plotW),
    height: String(plotH),
    class: "axis-frame",
    fill: "none",
  });
  svg.appendChild(frame);
  const ticks = 5;
  for (let i = 0; i <= ticks; i++) {
    const fx = viewport.xMin + (i / ticks) * (viewport.xMax - viewport.xMin);
    const fy = viewport.yMin + (i / ticks) * (viewport.yMax - viewport.yMin);
    const px = MARGIN.left + (i / ticks) * plotW;
    const py = MARGIN.top + plotH - (i / ticks) * plotH;
    const xLabel = svgElement("text", {
      x: String(px),
      y: String(MARGIN.top + plotH + 16),
      class: "tick",
      "text-anchor": "middle",
    });
    xLabel.textContent = fx.toFixed(2);
    const yLabel = svgElement("text", {
      x: String(MARGIN.left - 8),
      y: String(py + 4),
      class: "tick",
      "text-anchor": "end",
    });
    yLabel.textContent = fy.toFixed(2);
    svg.appendChild(xLabel);
    svg.appendChild(yLabel);
  }
  const xTitle = svgElement("text", {
    x: String(MARGIN.left + plotW / 2),
    y: String(HEIGHT - 8),
    class: "axis-title",
    "text-anchor": "middle",
  });
  xTitle.textContent = "variability";
  const yTitle = svgElement("text", {
    x: "14",
    y: String(MARGIN.top + plotH / 2),
    class: "axis-title",
    "text-anchor": "middle",
    transform: `rotate(-90 14 ${MARGIN.top + plotH / 2})`,
  });
  yTitle.textContent = "confidence";
  svg.appendChild(xTitle);
  svg.appendChild(yTitle);
}

export function renderDataMap(
  container: HTMLElement,
  points: DataMapPoint[],
  options: ScatterOptions = {},
): SVGSVGElement {
  const viewport = clampViewport(options.viewport ?? FULL_VIEWPORT);
  const selection = options.selection ?? null;

  container.textContent = "";
  const svg = svgElement("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: String(WIDTH),
    height: String(HEIGHT),
    class: "datamap",
    role: "img",
  });
  axis(svg, viewport);

  const tooltip = document.createElement("div");
  tooltip.className = "tooltip hidden";
  container.appendChild(tooltip);

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const toX = (v: number) =>
    MARGIN.left + ((v - viewport.xMin) / (viewport.xMax - viewport.xMin)) * plotW;
  const toY = (c: number) =>
    MARGIN.top + plotH - ((c - viewport.yMin) / (viewport.yMax - viewport.yMin)) * plotH;

  // selected marker drawn last so it sits on top
  const ordered = [...points.filter((p) => p.id !== selection)];
  const selected = points.find((p) => p.id === selection);
  if (selected) ordered.push(selected);

  for (const point of ordered) {
    const x = toX(point.variability);
    const y = toY(point.confidence);
    const marker = markerFor(point.gold_label, x, y);
    marker.classList.add("pt", `region-${point.region}`);
    marker.dataset.id = point.id;
    marker.dataset.label = point.gold_label;
    if (point.is_dcc) marker.classList.add("dcc");
    if (point.id === selection) marker.classList.add("selected");
    marker.addEventListener("mouseenter", () => {
      tooltip.classList.remove("hidden");
      tooltip.textContent =
        `${point.premise} — ${point.hypothesis} [${point.gold_label}]`;
    });
    marker.addEventListener("mouseleave", () => tooltip.classList.add("hidden"));
    if (point.is_dcc && options.onSelect) {
      marker.classList.add("clickable");
      marker.addEventListener("click", () => options.onSelect!(point));
    }
    svg.appendChild(marker);
  }

  container.appendChild(svg);
  return svg;
}
