import type { SearchResult } from "./types.js";

function citeKey(result: SearchResult): string {
  const family = result.authors[0]?.family_name?.toLowerCase().replace(/[^a-z0-9]/g, "") || "anon";
  const year = result.year ?? "nd";
  const suffix = result.paper_id.replace(/[^A-Za-z0-9]/g, "").slice(-6);
  return `${family}${year}${suffix}`;
}

function bibAuthors(result: SearchResult): string {
  return result.authors
    .map((a) => (a.given_name ? `${a.family_name}, ${a.given_name}` : a.family_name))
    .filter((s) => s.trim().length > 0)
    .join(" and ");
}

/** One BibTeX-style entry assembled from a result card's metadata. */
export function toBibtex(result: SearchResult): string {
  const fields: string[] = [`  title = {${result.title}}`];
  const authors = bibAuthors(result);
  if (authors) fields.push(`  author = {${authors}}`);
  if (result.year !== null) fields.push(`  year = {${result.year}}`);
  fields.push(`  note = {${result.corpus_id}:${result.paper_id}}`);
  return `@article{${citeKey(result)},\n${fields.join(",\n")}\n}`;
}

export function buildBibliography(results: SearchResult[]): string {
  return results.map(toBibtex).join("\n\n");
}
