import type { CiteRequest, CiteResponse, SearchRequest, SearchResponse } from "./types.js";

export class GatewayError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
    this.name = "GatewayError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin client over the gateway endpoints. The fetch implementation is
 * injectable so tests can replay recorded responses with no backend.
 */
export class GatewayClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const parsed = (await response.json()) as { detail?: string };
        if (parsed.detail) detail = parsed.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new GatewayError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  search(request: SearchRequest): Promise<SearchResponse> {
    return this.post<SearchResponse>("/search", request);
  }

  cite(request: CiteRequest): Promise<CiteResponse> {
    return this.post<CiteResponse>("/cite", request);
  }

  async paper(corpusId: string, paperId: string): Promise<unknown> {
    const response = await this.fetchFn(`${this.baseUrl}/papers/${corpusId}/${paperId}`);
    if (!response.ok) throw new GatewayError(response.status, `${response.status}`);
    return response.json();
  }
}
