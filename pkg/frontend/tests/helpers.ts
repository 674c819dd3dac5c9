/** Shared test fixtures: synthetic API payloads and a scripted fetch. */

import type {
  DataMapPoint,
  DccDetail,
  NeighborEntry,
  NliLabel,
  MapRegion,
} from "../src/types.js";
import { WorkbenchApi, type FetchLike } from "../src/api.js";

const LABELS: NliLabel[] = ["entailment", "neutral", "contradiction"];
const REGIONS: MapRegion[] = ["easy_to_learn", "ambiguous", "hard_to_learn", "other"];

/** Deterministic n-point data map covering all three labels; point 0 is the DCC. */
export function syntheticPoints(n: number): DataMapPoint[] {
  const points: DataMapPoint[] = [];
  for (let i = 0; i < n; i++) {
    points.push({
      id: `p${String(i).padStart(4, "0")}`,
      confidence: (i % 97) / 96,
      variability: ((i * 7) % 49) / 96, // stays within [0, 0.5]
      region: REGIONS[i % REGIONS.length],
      is_dcc: i === 0,
      gold_label: LABELS[i % 3],
      premise: `Premise ${i}.`,
      hypothesis: `Hypothesis ${i}.`,
    });
  }
  return points;
}

export function neighborEntry(
  id: string,
  label: NliLabel,
  similarity: number,
): NeighborEntry {
  return {
    id,
    similarity,
    label,
    premise: `Neighbor premise ${id}.`,
    hypothesis: `Neighbor hypothesis ${id}.`,
    confidence: 0.4,
    variability: 0.1,
  };
}

export function dccDetail(overrides: Partial<DccDetail> = {}): DccDetail {
  return {
    id: "p0000",
    premise: "A crowd walks toward the gate, most carrying backpacks.",
    hypothesis: "The crowd needs backpacks for the gate.",
    gold_label: "neutral",
    confidence: 0.25,
    variability: 0.05,
    region: "hard_to_learn",
    majority_fraction: 0.75,
    triggering_neighbors: [neighborEntry("t1", "entailment", 0.97)],
    different_label_neighbors: [
      neighborEntry("d1", "entailment", 0.97),
      neighborEntry("d2", "entailment", 0.91),
      neighborEntry("d3", "contradiction", 0.52),
      neighborEntry("d4", "contradiction", 0.31),
    ],
    same_label_neighbors: [
      neighborEntry("s1", "neutral", 0.94),
      neighborEntry("s2", "neutral", 0.9),
      neighborEntry("s3", "neutral", 0.87),
      neighborEntry("s4", "neutral", 0.8),
    ],
    ...overrides,
  };
}

export interface ScriptedRoute {
  method?: string;
  match: string | RegExp;
  status?: number;
  body: unknown | ((input: string, init?: RequestInit) => unknown);
  /** resolve manually to test in-flight behaviour */
  gate?: Promise<void>;
}

export interface RecordedPayload {
  url: string;
  body: Record<string, unknown>;
}

/** fetch double: routes matched in order; unmatched requests fail loudly. */
export function scriptedFetch(
  routes: ScriptedRoute[],
): FetchLike & { calls: string[]; payloads: RecordedPayload[] } {
  const calls: string[] = [];
  const payloads: RecordedPayload[] = [];
  const fn = (async (input: string, init?: RequestInit) => {
    const method = init?.method ?? "GET";
    calls.push(`${method} ${input}`);
    if (typeof init?.body === "string") {
      payloads.push({ url: input, body: JSON.parse(init.body) });
    }
    for (const route of routes) {
      const matches =
        typeof route.match === "string" ? input.includes(route.match) : route.match.test(input);
      if (matches && (route.method ?? "GET") === method) {
        if (route.gate) await route.gate;
        const body =
          typeof route.body === "function"
            ? (route.body as (i: string, x?: RequestInit) => unknown)(input, init)
            : route.body;
        return new Response(JSON.stringify(body), {
          status: route.status ?? 200,
          headers: { "Content-Type": "application/json" },
        });
      }
    }
    throw new Error(`no scripted route for ${method} ${input}`);
  }) as FetchLike & { calls: string[]; payloads: RecordedPayload[] };
  fn.calls = calls;
  fn.payloads = payloads;
  return fn;
}

export function apiWith(routes: ScriptedRoute[]): {
  api: WorkbenchApi;
  fetchFn: ReturnType<typeof scriptedFetch>;
} {
  const fetchFn = scriptedFetch(routes);
  return { api: new WorkbenchApi("", fetchFn), fetchFn };
}
