// Model upload view: paste the model text, see diagnostics inline at their
// line numbers, and move on to a session once the upload is accepted.

import type { Diagnostic } from "../api";
import { el } from "../dom";
import type { ConsoleState } from "../state";
import { useCasesByActor } from "../state";

export interface UploadHandlers {
  onUpload(source: string): void;
  onStartSession(): void;
  onRetry(): void;
}

function diagnosticLine(diag: Diagnostic): string {
  const where = diag.line !== null ? `line ${diag.line}: ` : "";
  return `${where}${diag.code}: ${diag.message}`;
}

function sourceWithMarkers(source: string, diagnostics: Diagnostic[]): HTMLElement {
  const byLine = new Map<number, Diagnostic[]>();
  for (const diag of diagnostics) {
    if (diag.line === null) continue;
    const bucket = byLine.get(diag.line) ?? [];
    bucket.push(diag);
    byLine.set(diag.line, bucket);
  }
  const pre = el("pre", { class: "source-listing" });
  source.split("\n").forEach((text, index) => {
    const lineNo = index + 1;
    const problems = byLine.get(lineNo) ?? [];
    const row = el(
      "div",
      { class: problems.length > 0 ? "source-line has-error" : "source-line" },
      [el("span", { class: "lineno" }, [String(lineNo)]), text],
    );
    pre.append(row);
    for (const diag of problems) {
      pre.append(
        el("div", { class: "inline-diagnostic", "data-line": String(lineNo) }, [
          diagnosticLine(diag),
        ]),
      );
    }
  });
  return pre;
}

export function renderUpload(state: ConsoleState, handlers: UploadHandlers): HTMLElement {
  const root = el("section", { class: "view-upload" });
  const textarea = el("textarea", {
    class: "model-source",
    rows: "16",
    placeholder: 'model "Name" ...',
  });
  textarea.value = state.draftSource;

  if (state.banner) {
    const banner = el("div", { class: "banner error" }, [state.banner, " "]);
    const retry = el("button", { class: "retry" }, ["Retry"]);
    retry.addEventListener("click", handlers.onRetry);
    banner.append(retry);
    root.append(banner);
  }

  const submit = el("button", { class: "upload" }, ["Upload model"]);
  submit.addEventListener("click", () => handlers.onUpload(textarea.value));
  root.append(textarea, submit);

  if (state.modelDiagnostics.length > 0) {
    root.append(
      el(
        "ul",
        { class: "diagnostics" },
        state.modelDiagnostics.map((diag) =>
          el("li", { class: `diag ${diag.severity}` }, [diagnosticLine(diag)]),
        ),
      ),
      sourceWithMarkers(state.draftSource, state.modelDiagnostics),
    );
  }

  if (state.model && state.modelId) {
    const summary = el("div", { class: "model-summary" });
    summary.append(
      el("h2", {}, [`Model uploaded (${state.model.use_cases.length} use cases)`]),
    );
    if (state.modelWarnings.length > 0) {
      summary.append(
        el(
          "ul",
          { class: "warnings" },
          state.modelWarnings.map((w) => el("li", {}, [diagnosticLine(w)])),
        ),
      );
    }
    const groups = el("div", { class: "actor-groups" });
    for (const [actor, useCases] of useCasesByActor(state.model)) {
      if (useCases.length === 0) continue;
      groups.append(
        el("div", { class: "actor-group" }, [
          el("h3", {}, [actor]),
          el(
            "ul",
            {},
            useCases.map((u) => el("li", { class: "use-case" }, [u])),
          ),
        ]),
      );
    }
    const start = el("button", { class: "start-session" }, ["Start session"]);
    start.addEventListener("click", handlers.onStartSession);
    summary.append(groups, start);
    root.append(summary);
  }
  return root;
}
