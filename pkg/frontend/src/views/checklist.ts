// Checklist view: a heatmap grid of the last server-acknowledged checklist
// snapshot, a drill-down of the answers behind a clicked cell, coverage
// counters, and export buttons that download the service's CSV/Markdown
// renderings byte-for-byte.

import { el } from "../dom";
import type { ConsoleState } from "../state";
import { rowsBehindCell } from "../state";
import type { ExportFormat } from "../api";

export interface ChecklistHandlers {
  onCellClick(useCase: string, category: string): void;
  onExport(format: ExportFormat): void;
}

export function renderChecklist(
  state: ConsoleState,
  handlers: ChecklistHandlers,
): HTMLElement {
  const root = el("section", { class: "view-checklist" });
  const snapshot = state.checklist;
  if (!snapshot) {
    root.append(el("p", {}, ["No checklist yet."]));
    return root;
  }

  const table = el("table", { class: "heatmap" });
  const header = el("tr", {}, [el("th", {}, ["NFR → FR ↓"])]);
  for (const category of snapshot.columns) header.append(el("th", {}, [category]));
  table.append(header);

  snapshot.rows.forEach((useCase, i) => {
    const row = el("tr", {}, [el("th", {}, [useCase])]);
    snapshot.columns.forEach((category, j) => {
      const checked = snapshot.cells[i]?.[j] === true;
      const cell = el(
        "td",
        {
          class: checked ? "cell checked" : "cell",
          "data-use-case": useCase,
          "data-category": category,
        },
        [checked ? "✓" : ""],
      );
      cell.addEventListener("click", () => handlers.onCellClick(useCase, category));
      row.append(cell);
    });
    table.append(row);
  });
  root.append(table);

  const exports = el("div", { class: "exports" });
  for (const format of ["csv", "md"] as ExportFormat[]) {
    const button = el("button", { class: `export export-${format}` }, [
      `Download ${format.toUpperCase()}`,
    ]);
    button.addEventListener("click", () => handlers.onExport(format));
    exports.append(button);
  }
  root.append(exports);

  if (state.cellFilter) {
    const rows = rowsBehindCell(state.table, state.cellFilter);
    const panel = el("div", { class: "cell-drilldown" }, [
      el("h3", {}, [
        `${state.cellFilter.useCase} × ${state.cellFilter.category}`,
      ]),
    ]);
    if (rows.length === 0) {
      panel.append(el("p", {}, ["No answers behind this cell."]));
    } else {
      panel.append(
        el(
          "ul",
          { class: "cell-answers" },
          rows.map((r) =>
            el("li", {}, [`${r.question_no} (${r.actor}): ${r.answer}`]),
          ),
        ),
      );
    }
    root.append(panel);
  }

  if (state.coverage) {
    root.append(
      el("div", { class: "coverage" }, [
        el("span", { class: "coverage-unanswered" }, [
          `unanswered: ${state.coverage.unanswered_questions.length}`,
        ]),
        el("span", { class: "coverage-unused" }, [
          `unused categories: ${state.coverage.unused_categories.length}`,
        ]),
        el("span", { class: "coverage-questionless" }, [
          `FRs without questions: ${state.coverage.frs_without_questions.length}`,
        ]),
      ]),
    );
  }
  return root;
}
