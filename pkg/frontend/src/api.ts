/** Thin typed client over the workbench JSON API.
 *
 * The dashboard never computes truth locally: every number it shows comes
 * out of one of these calls. The fetch function is injectable so tests can
 * script responses.
 */

import type {
  DataMapResponse,
  DccDetail,
  DccListResponse,
  DraftState,
  EstimateResponse,
  NliLabel,
  SubmitResponse,
  SuggestResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly kind: string,
    detail: string,
  ) {
    super(detail);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let kind = "HttpError";
    let detail = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as { error?: string; detail?: string };
      kind = body.error ?? kind;
      detail = body.detail ?? detail;
    } catch {
      // non-JSON error body: keep the generic detail
    }
    throw new ApiError(response.status, kind, detail);
  }
  return (await response.json()) as T;
}

export class WorkbenchApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private get(path: string): Promise<Response> {
    return this.fetchFn(this.base + path);
  }

  private post(path: string, payload: unknown): Promise<Response> {
    return this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async dataMap(): Promise<DataMapResponse> {
    return parseOrThrow(await this.get("/api/datamap"));
  }

  async dccList(): Promise<DccListResponse> {
    return parseOrThrow(await this.get("/api/dccs"));
  }

  async dccDetail(id: string): Promise<DccDetail> {
    return parseOrThrow(await this.get(`/api/dccs/${encodeURIComponent(id)}`));
  }

  async suggest(id: string, n: number): Promise<SuggestResponse> {
    return parseOrThrow(await this.post(`/api/dccs/${encodeURIComponent(id)}/suggest`, { n }));
  }

  async createDraft(payload: {
    seed_dcc_id: string;
    premise: string;
    hypothesis: string;
    user_label: NliLabel;
    origin: "llm_suggestion" | "manual";
    suggestion_fingerprint?: string | null;
    tags?: string[];
  }): Promise<DraftState> {
    return parseOrThrow(await this.post("/api/drafts", payload));
  }

  async estimate(
    draftId: string,
    fields: { premise: string; hypothesis: string; user_label: NliLabel },
  ): Promise<EstimateResponse> {
    return parseOrThrow(
      await this.post(`/api/drafts/${encodeURIComponent(draftId)}/estimate`, fields),
    );
  }

  async submit(draftId: string): Promise<SubmitResponse> {
    return parseOrThrow(
      await this.post(`/api/drafts/${encodeURIComponent(draftId)}/submit`, {}),
    );
  }

  exportUrl(tags: string[] = []): string {
    const query = tags.length ? `?tags=${encodeURIComponent(tags.join(","))}` : "";
    return `${this.base}/api/export${query}`;
  }
}
