import { GatewayClient } from "./api.js";
import { buildBibliography } from "./export.js";
import type { SearchResult } from "./types.js";
import { resultKey } from "./types.js";

export interface SessionState {
  context: string;
  keywords: string;
  page: number; // 1-based
  pageSize: number;
  results: SearchResult[] | null; // null until the first search
  registryVersion: number | null;
  warnings: string[];
  editorBuffer: string;
  citedKeys: string[]; // in cite order, deduplicated
  loading: boolean;
  error: string | null;
  toast: string | null;
}

type Listener = (state: SessionState) => void;

/**
 * UI session: search inputs, the current result page, the editing area
 * and per-card cite/fine-tune bookkeeping. The editor buffer changes only
 * through user edits (setEditor) and explicit cite actions. At most one
 * search is in flight; a newer search supersedes the response of an older
 * one. Fine-tune requests are per-card with cancel-on-replace.
 */
export class SearchSession {
  private state: SessionState;
  private listeners: Listener[] = [];
  private searchEpoch = 0;
  private fineTuneEpochs = new Map<string, number>();

  constructor(
    private readonly client: GatewayClient,
    pageSize = 10,
  ) {
    this.state = {
      context: "",
      keywords: "",
      page: 1,
      pageSize,
      results: null,
      registryVersion: null,
      warnings: [],
      editorBuffer: "",
      citedKeys: [],
      loading: false,
      error: null,
      toast: null,
    };
  }

  getState(): Readonly<SessionState> {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  setInputs(context: string, keywords: string): void {
    this.update({ context, keywords });
  }

  setEditor(text: string): void {
    this.update({ editorBuffer: text });
  }

  clearToast(): void {
    this.update({ toast: null });
  }

  /** POST /search; on failure the inputs and previous results survive. */
  async search(context?: string, keywords?: string): Promise<void> {
    const ctx = context ?? this.state.context;
    const kw = keywords ?? this.state.keywords;
    const epoch = ++this.searchEpoch;
    this.update({ context: ctx, keywords: kw, loading: true, error: null });
    try {
      const response = await this.client.search({ context: ctx, keywords: kw });
      if (epoch !== this.searchEpoch) return; // superseded by a newer search
      this.update({
        results: response.results,
        registryVersion: response.registry_version,
        warnings: response.warnings,
        page: 1,
        loading: false,
      });
    } catch (err) {
      if (epoch !== this.searchEpoch) return;
      this.update({ loading: false, error: err instanceof Error ? err.message : String(err) });
    }
  }

  pageCount(): number {
    const total = this.state.results?.length ?? 0;
    return Math.max(1, Math.ceil(total / this.state.pageSize));
  }

  setPage(page: number): void {
    const clamped = Math.min(Math.max(1, page), this.pageCount());
    this.update({ page: clamped });
  }

  currentPageResults(): SearchResult[] {
    const results = this.state.results ?? [];
    const start = (this.state.page - 1) * this.state.pageSize;
    return results.slice(start, start + this.state.pageSize);
  }

  findResult(key: string): SearchResult | undefined {
    return (this.state.results ?? []).find((r) => resultKey(r) === key);
  }

  isCited(key: string): boolean {
    return this.state.citedKeys.includes(key);
  }

  /** Append the card's suggested sentence to the editing area. */
  cite(key: string): void {
    const result = this.findResult(key);
    if (!result || !result.suggested_citation) return;
    const buffer = this.state.editorBuffer;
    const glue = buffer && !buffer.endsWith(" ") && !buffer.endsWith("\n") ? " " : "";
    this.update({
      editorBuffer: buffer + glue + result.suggested_citation,
      citedKeys: this.isCited(key) ? this.state.citedKeys : [...this.state.citedKeys, key],
    });
  }

  /**
   * Re-request the suggestion for one card with edited keywords; only that
   * card changes. On failure the previous suggestion stays and a toast is
   * raised.
   */
  async fineTune(key: string, newKeywords: string): Promise<void> {
    const result = this.findResult(key);
    if (!result) return;
    const epoch = (this.fineTuneEpochs.get(key) ?? 0) + 1;
    this.fineTuneEpochs.set(key, epoch);
    try {
      const response = await this.client.cite({
        corpus_id: result.corpus_id,
        paper_id: result.paper_id,
        context: this.state.context,
        keywords: newKeywords,
      });
      if (this.fineTuneEpochs.get(key) !== epoch) return; // replaced by a newer request
      const results = (this.state.results ?? []).map((r) =>
        resultKey(r) === key ? { ...r, suggested_citation: response.sentence } : r,
      );
      this.update({ results });
    } catch (err) {
      if (this.fineTuneEpochs.get(key) !== epoch) return;
      this.update({ toast: `fine-tune failed: ${err instanceof Error ? err.message : String(err)}` });
    }
  }

  /** Reference list for every cited paper, in cite order. */
  exportCitations(): string {
    const cited = this.state.citedKeys
      .map((key) => this.findResult(key))
      .filter((r): r is SearchResult => r !== undefined);
    return buildBibliography(cited);
  }
}
