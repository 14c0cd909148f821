import { GatewayClient } from "./api.js";
import { KEYWORD_SYNTAX_HELP, renderResults, renderToast } from "./render.js";
import { SearchSession } from "./state.js";

function requireEl<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

export function mount(root: Document = document): SearchSession {
  const params = new URLSearchParams(root.location?.search ?? "");
  const baseUrl = params.get("gateway") ?? "http://127.0.0.1:8000";
  const session = new SearchSession(new GatewayClient(baseUrl));

  const contextInput = requireEl<HTMLTextAreaElement>("context-input");
  const keywordsInput = requireEl<HTMLInputElement>("keywords-input");
  const searchButton = requireEl<HTMLButtonElement>("search-button");
  const resultsPane = requireEl<HTMLDivElement>("results-pane");
  const editor = requireEl<HTMLTextAreaElement>("editor");
  const exportButton = requireEl<HTMLButtonElement>("export-button");
  const exportPane = requireEl<HTMLPreElement>("export-pane");
  const toastPane = requireEl<HTMLDivElement>("toast-pane");
  requireEl<HTMLParagraphElement>("keyword-help").textContent = KEYWORD_SYNTAX_HELP;

  session.subscribe((state) => {
    resultsPane.innerHTML = renderResults(state, session.currentPageResults(), session.pageCount());
    toastPane.innerHTML = renderToast(state);
    if (editor.value !== state.editorBuffer) editor.value = state.editorBuffer;
  });

  searchButton.addEventListener("click", () => {
    void session.search(contextInput.value, keywordsInput.value);
  });
  editor.addEventListener("input", () => session.setEditor(editor.value));
  exportButton.addEventListener("click", () => {
    exportPane.textContent = session.exportCitations();
  });
  resultsPane.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action) return;
    if (action === "cite") session.cite(target.dataset.key ?? "");
    if (action === "fine-tune") void session.fineTune(target.dataset.key ?? "", keywordsInput.value);
    if (action === "page") session.setPage(Number(target.dataset.page));
  });

  return session;
}

if (typeof document !== "undefined" && document.getElementById("results-pane")) {
  mount();
}
