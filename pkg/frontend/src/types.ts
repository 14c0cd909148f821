/** Gateway JSON contract (response schema v1). */

export interface AuthorName {
  given_name: string;
  family_name: string;
}

export interface SearchResult {
  paper_id: string;
  corpus_id: string;
  title: string;
  authors: AuthorName[];
  year: number | null;
  abstract: string;
  cosine: number | null;
  affinity: number | null;
  highlights: string[] | null;
  suggested_citation: string | null;
  warnings: string[];
}

export interface SearchResponse {
  schema: string;
  registry_version: number;
  np: number;
  k: number;
  results: SearchResult[];
  warnings: string[];
}

export interface SearchRequest {
  context: string;
  keywords: string;
  np?: number;
  k?: number;
}

export interface CiteRequest {
  corpus_id: string;
  paper_id: string;
  context: string;
  keywords: string;
}

export interface CiteResponse {
  sentence: string;
  input_format: string;
  warnings: string[];
}

/** Stable key for one result card. */
export function resultKey(result: Pick<SearchResult, "corpus_id" | "paper_id">): string {
  return `${result.corpus_id}/${result.paper_id}`;
}
