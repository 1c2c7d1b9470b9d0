// Typed client for the semantic-unit service. The UI computes no domain
// logic: everything rendered comes back from these calls.

import type {
  ApiErrorBody,
  FacetSummaryJson,
  MindMapJson,
  NavNodeJson,
  Page,
  QuestionCreated,
  ResultRow,
  UnitClassInfo,
  UnitView,
  ZoomLevel,
  ZoomTriplesJson,
  ZoomUnitsJson,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public details: string[] = [],
  ) {
    super(message);
  }
}

export const STORE_IRI = "urn:x-semunit:graph";

function enc(iri: string): string {
  return encodeURIComponent(iri);
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let parsed: ApiErrorBody | null = null;
      try {
        parsed = (await response.json()) as ApiErrorBody;
      } catch {
        // non-JSON error body; fall through
      }
      throw new ApiError(
        parsed?.code ?? String(response.status),
        parsed?.message ?? `request failed: ${method} ${path}`,
        parsed?.details ?? [],
      );
    }
    const contentType = response.headers.get("content-type") ?? "";
    if (contentType.includes("json")) {
      return (await response.json()) as T;
    }
    return (await response.text()) as unknown as T;
  }

  navtree(gupri: string, opts: { linkFilter?: string[]; statements?: boolean } = {}) {
    const params = new URLSearchParams();
    if (opts.linkFilter && opts.linkFilter.length) {
      params.set("link_filter", opts.linkFilter.map(enc).join(","));
    }
    params.set("statements", String(opts.statements ?? false));
    return this.request<NavNodeJson>("GET", `/navtree/${enc(gupri)}?${params}`);
  }

  unit(gupri: string) {
    return this.request<UnitView>("GET", `/units/${enc(gupri)}`);
  }

  mindmap(gupri: string) {
    return this.request<MindMapJson>("GET", `/units/${enc(gupri)}/mindmap`);
  }

  containing(gupri: string) {
    return this.request<Record<string, string[]>>(
      "GET",
      `/units/${enc(gupri)}/containing`,
    );
  }

  zoom(gupri: string, level: ZoomLevel) {
    return this.request<ZoomUnitsJson | ZoomTriplesJson>(
      "GET",
      `/zoom/${enc(gupri)}?level=${level}`,
    );
  }

  unitClasses() {
    return this.request<Page<UnitClassInfo>>("GET", "/unit-classes?limit=200");
  }

  createStatement(body: {
    schema: string;
    subject: string;
    slots: Record<string, string | string[]>;
    negated?: boolean;
    revises?: string;
  }) {
    return this.request<UnitView>("POST", "/statements", body);
  }

  createQuestion(body: unknown) {
    return this.request<QuestionCreated>("POST", "/questions", body);
  }

  executeQuestion(gupri: string) {
    return this.request<Page<ResultRow> | { boolean: boolean }>(
      "POST",
      `/questions/${enc(gupri)}/execute`,
    );
  }

  sparql(gupri: string) {
    return this.request<string>("GET", `/questions/${enc(gupri)}/sparql`);
  }

  facets(units: string[], filters: unknown[] = []) {
    return this.request<{ units: string[]; facets: FacetSummaryJson }>(
      "POST",
      "/facets",
      { units, filters },
    );
  }
}
