// Elicit view: the pending-question queue in server order, an answer box for
// the selected question, and a category picker with the service's keyword
// suggestions surfaced first. Submitting issues a PUT; the queue only
// shrinks once the server has acknowledged.

import { el } from "../dom";
import type { ConsoleState } from "../state";

export interface ElicitHandlers {
  onSelect(questionId: string): void;
  onDraftChange(text: string): void;
  onSubmit(category: string): void;
}

export function renderElicit(state: ConsoleState, handlers: ElicitHandlers): HTMLElement {
  const root = el("section", { class: "view-elicit" });

  const queue = el("ol", { class: "question-queue" });
  for (const question of state.pending) {
    const item = el(
      "li",
      {
        class:
          question.id === state.selectedQuestion ? "question selected" : "question",
        "data-question": question.id,
      },
      [el("strong", {}, [question.id]), ` [${question.use_case}] ${question.text}`],
    );
    item.addEventListener("click", () => handlers.onSelect(question.id));
    queue.append(item);
  }
  root.append(el("h2", {}, [`Pending questions (${state.pending.length})`]), queue);

  if (state.pending.length === 0) {
    root.append(el("p", { class: "all-done" }, ["No pending questions."]));
    return root;
  }

  const selected = state.pending.find((q) => q.id === state.selectedQuestion);
  if (!selected) return root;

  const panel = el("div", { class: "answer-panel" });
  panel.append(el("h3", {}, [`${selected.id}: ${selected.text}`]));

  const answerBox = el("textarea", { class: "answer-box", rows: "3" });
  answerBox.value = state.draftAnswer;
  answerBox.addEventListener("input", () => handlers.onDraftChange(answerBox.value));
  panel.append(answerBox);

  if (state.fieldError) {
    panel.append(el("div", { class: "field-error" }, [state.fieldError]));
  }

  const bestScore = state.suggestions[0]?.score ?? 0;
  const suggested = new Set(
    state.suggestions
      .filter((s) => bestScore > 0 && s.score === bestScore)
      .map((s) => s.category),
  );
  const picker = el("div", { class: "category-picker" });
  const rankedFirst = [
    ...state.suggestions.map((s) => s.category),
    ...state.taxonomy.filter(
      (c) => !state.suggestions.some((s) => s.category === c),
    ),
  ];
  for (const category of rankedFirst) {
    const button = el(
      "button",
      {
        class: suggested.has(category) ? "category suggested" : "category",
        "data-category": category,
      },
      [category],
    );
    button.addEventListener("click", () => handlers.onSubmit(category));
    picker.append(button);
  }
  panel.append(
    el("p", { class: "picker-hint" }, [
      "Pick a category to submit (suggestions first, confirmation is yours):",
    ]),
    picker,
  );
  root.append(panel);
  return root;
}
