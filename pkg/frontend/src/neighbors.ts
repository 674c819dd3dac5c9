/** The two diagnosis boxes: most similar different-label neighbors and most
 * similar same-label neighbors, in exactly the order the API served them. */

import type { DccDetail, NeighborEntry, NliLabel } from "./types.js";

const SHAPE_GLYPH: Record<NliLabel, string> = {
  entailment: "●", // circle
  neutral: "▲", // triangle
  contradiction: "■", // square
};

function neighborRow(entry: NeighborEntry): HTMLElement {
  const row = document.createElement("div");
  row.className = "neighbor-row";
  row.dataset.id = entry.id;

  const glyph = document.createElement("span");
  glyph.className = `shape shape-${entry.label}`;
  glyph.textContent = SHAPE_GLYPH[entry.label];
  glyph.title = entry.label;

  const sim = document.createElement("span");
  sim.className = "similarity";
  sim.textContent = entry.similarity.toFixed(3);

  const text = document.createElement("span");
  text.className = "pair";
  text.textContent = `${entry.premise} → ${entry.hypothesis}`;

  row.append(glyph, sim, text);
  return row;
}

function box(title: string, kind: string, entries: NeighborEntry[]): HTMLElement {
  const section = document.createElement("section");
  section.className = `neighbor-box ${kind}`;

  const heading = document.createElement("h3");
  heading.textContent = title;
  section.appendChild(heading);

  if (entries.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No neighbors with this label.";
    section.appendChild(empty);
    return section;
  }
  for (const entry of entries) section.appendChild(neighborRow(entry));
  return section;
}

export function renderNeighborBoxes(container: HTMLElement, detail: DccDetail): void {
  container.textContent = "";

  const seed = document.createElement("div");
  seed.className = "seed-card";
  seed.innerHTML = "";
  const seedTitle = document.createElement("h3");
  seedTitle.textContent = `Seed: ${detail.id} (${detail.gold_label})`;
  const seedText = document.createElement("p");
  seedText.textContent = `${detail.premise} → ${detail.hypothesis}`;
  const seedStats = document.createElement("p");
  seedStats.className = "seed-stats";
  seedStats.textContent =
    `confidence ${detail.confidence.toFixed(3)} · ` +
    `variability ${detail.variability.toFixed(3)} · ${detail.region} · ` +
    `agreement ${detail.majority_fraction.toFixed(2)}`;
  seed.append(seedTitle, seedText, seedStats);
  container.appendChild(seed);

  container.appendChild(
    box("Most similar, different label", "different-label", detail.different_label_neighbors),
  );
  container.appendChild(
    box("Most similar, same label", "same-label", detail.same_label_neighbors),
  );
}
