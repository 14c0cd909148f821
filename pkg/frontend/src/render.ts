import type { SessionState } from "./state.js";
import type { SearchResult } from "./types.js";
import { resultKey } from "./types.js";

/** Query-syntax help shown under the keywords input. */
export const KEYWORD_SYNTAX_HELP =
  "Keywords: clauses separated by ';' must all match; alternatives inside a " +
  "clause are separated by '|'. 'YYYY..YYYY' filters publication years " +
  "(inclusive); 'publicationdate.year:2020' filters one field. Example: " +
  "NLP; machine translation|NMT; 2020..2022";

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function formatAuthors(result: SearchResult): string {
  return result.authors
    .map((a) => [a.given_name, a.family_name].filter(Boolean).join(" "))
    .filter((s) => s.length > 0)
    .join(", ");
}

export function renderResultCard(result: SearchResult, cited: boolean): string {
  const key = resultKey(result);
  const authors = formatAuthors(result);
  const year = result.year !== null ? ` (${result.year})` : "";
  const highlights =
    result.highlights && result.highlights.length > 0
      ? `<ul class="highlights">${result.highlights.map((h) => `<li>${escapeHtml(h)}</li>`).join("")}</ul>`
      : `<p class="highlights-missing">No highlights available.</p>`;
  const suggestion =
    result.suggested_citation !== null
      ? `<blockquote class="suggestion">${escapeHtml(result.suggested_citation)}</blockquote>`
      : `<p class="suggestion-missing">No suggested citation.</p>`;
  const warnings = result.warnings.length
    ? `<p class="card-warnings">${result.warnings.map(escapeHtml).join("; ")}</p>`
    : "";
  return `
<article class="result-card${cited ? " cited" : ""}" data-key="${escapeHtml(key)}">
  <h3>${escapeHtml(result.title)}${year}</h3>
  <p class="authors">${escapeHtml(authors)}</p>
  ${highlights}
  ${suggestion}
  ${warnings}
  <div class="card-actions">
    <button data-action="cite" data-key="${escapeHtml(key)}">cite</button>
    <button data-action="fine-tune" data-key="${escapeHtml(key)}">fine-tune generation</button>
  </div>
</article>`.trim();
}

export function renderPagination(page: number, pageCount: number): string {
  if (pageCount <= 1) return "";
  const buttons: string[] = [];
  for (let p = 1; p <= pageCount; p++) {
    buttons.push(
      p === page
        ? `<button class="page current" disabled>${p}</button>`
        : `<button class="page" data-action="page" data-page="${p}">${p}</button>`,
    );
  }
  return `<nav class="pagination">${buttons.join("")}</nav>`;
}

export function renderResults(state: SessionState, pageResults: SearchResult[], pageCount: number): string {
  if (state.loading) return `<p class="loading">Searching…</p>`;
  if (state.error) {
    return `<div class="error-banner">${escapeHtml(state.error)}</div>`;
  }
  if (state.results === null) {
    return `<p class="empty">Enter a context (and optional keywords) to search.</p>`;
  }
  if (state.results.length === 0) {
    return `<p class="empty">No results.</p>`;
  }
  const warnings = state.warnings.length
    ? `<div class="warnings">${state.warnings.map(escapeHtml).join("; ")}</div>`
    : "";
  const cards = pageResults.map((r) => renderResultCard(r, state.citedKeys.includes(resultKey(r)))).join("\n");
  return `${warnings}\n<div class="results">${cards}</div>\n${renderPagination(state.page, pageCount)}`.trim();
}

export function renderToast(state: SessionState): string {
  return state.toast ? `<div class="toast">${escapeHtml(state.toast)}</div>` : "";
}
