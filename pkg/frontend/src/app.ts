// Controller: wires the API client, the state store and the three views.
// Two rules are enforced here rather than in any one view:
//   * a question leaves the queue only after the server acknowledged the PUT;
//   * checklist/coverage/table panels are replaced wholesale with server
//     responses on ack or poll, never edited locally.

import { ApiClient, ApiError } from "./api";
import type { ExportFormat } from "./api";
import { clear, download, el } from "./dom";
import { StateStore } from "./state";
import { renderChecklist } from "./views/checklist";
import { renderElicit } from "./views/elicit";
import { renderUpload } from "./views/upload";

export interface ConsoleOptions {
  /** Poll interval for the server-truth panels; 0 disables the timer. */
  pollIntervalMs?: number;
  /** Download hook, replaceable in tests; defaults to a Blob anchor click. */
  onDownload?(filename: string, text: string, mediaType: string): void;
}

const EXPORT_MEDIA: Record<ExportFormat, string> = {
  csv: "text/csv",
  md: "text/markdown",
};

export class ConsoleApp {
  readonly store = new StateStore();
  private lastUploadSource = "";
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly options: ConsoleOptions = {},
  ) {}

  // --- upload flow -----------------------------------------------------------

  async uploadModel(source: string): Promise<void> {
    this.lastUploadSource = source;
    this.store.patch({ draftSource: source });
    try {
      const result = await this.api.uploadModel(source);
      if (!result.ok) {
        this.store.patch({
          banner: null,
          modelDiagnostics: result.diagnostics,
          modelId: null,
          model: null,
        });
        return;
      }
      const model = await this.api.getModel(result.modelId);
      this.store.patch({
        banner: null,
        modelDiagnostics: [],
        modelWarnings: result.warnings,
        modelId: result.modelId,
        model,
      });
    } catch (error) {
      this.store.patch({ banner: describeFailure(error) });
    }
  }

  async retryUpload(): Promise<void> {
    if (this.lastUploadSource) await this.uploadModel(this.lastUploadSource);
  }

  async startSession(taxonomy?: string[]): Promise<void> {
    const { modelId } = this.store.get();
    if (!modelId) return;
    try {
      const session = await this.api.createSession(modelId, taxonomy);
      this.store.patch({
        sessionId: session.session_id,
        taxonomy: session.taxonomy,
        view: "elicit",
        banner: null,
      });
      await this.refreshQueue();
      await this.refreshSnapshots();
    } catch (error) {
      this.store.patch({ banner: describeFailure(error) });
    }
  }

  // --- elicit flow -----------------------------------------------------------

  async selectQuestion(questionId: string): Promise<void> {
    this.store.patch({
      selectedQuestion: questionId,
      draftAnswer: "",
      suggestions: [],
      fieldError: null,
    });
  }

  setDraft(text: string): void {
    this.store.patch({ draftAnswer: text });
  }

  /** Ask the service to rank categories for the current draft. */
  async refreshSuggestions(): Promise<void> {
    const { sessionId, draftAnswer } = this.store.get();
    if (!sessionId) return;
    const suggestions = await this.api.suggest(sessionId, draftAnswer);
    this.store.patch({ suggestions });
  }

  async submitAnswer(category: string): Promise<void> {
    const { sessionId, selectedQuestion, draftAnswer } = this.store.get();
    if (!sessionId || !selectedQuestion) return;
    if (!draftAnswer.trim()) {
      // local validation: a blank answer never reaches the service
      this.store.patch({ fieldError: "Answer must not be blank." });
      return;
    }
    try {
      await this.api.putAnswer(sessionId, selectedQuestion, {
        answer: draftAnswer,
        category,
      });
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        // keep the draft; surface the field-level message
        this.store.patch({ fieldError: error.message });
        return;
      }
      this.store.patch({ banner: describeFailure(error) });
      return;
    }
    this.store.patch({ draftAnswer: "", suggestions: [], fieldError: null });
    await this.refreshQueue();
    await this.refreshSnapshots();
  }

  /** Pending queue from the server; selection moves to the first entry. */
  async refreshQueue(): Promise<void> {
    const { sessionId, selectedQuestion } = this.store.get();
    if (!sessionId) return;
    const pending = await this.api.pendingQuestions(sessionId);
    const stillPending = pending.some((q) => q.id === selectedQuestion);
    this.store.patch({
      pending,
      selectedQuestion: stillPending ? selectedQuestion : (pending[0]?.id ?? null),
    });
  }

  /** Server-truth panels: table, checklist, coverage. */
  async refreshSnapshots(): Promise<void> {
    const { sessionId } = this.store.get();
    if (!sessionId) return;
    const [table, checklist, coverage] = await Promise.all([
      this.api.tableJson(sessionId),
      this.api.checklistJson(sessionId),
      this.api.coverageJson(sessionId),
    ]);
    this.store.patch({ table, checklist, coverage });
  }

  // --- checklist flow ----------------------------------------------------------

  filterCell(useCase: string, category: string): void {
    this.store.patch({ cellFilter: { useCase, category } });
  }

  async exportChecklist(format: ExportFormat): Promise<string> {
    const { sessionId } = this.store.get();
    if (!sessionId) throw new Error("no active session");
    const text = await this.api.reportText(sessionId, "checklist", format);
    const handler = this.options.onDownload ?? download;
    handler(`checklist.${format}`, text, EXPORT_MEDIA[format]);
    return text;
  }

  showView(view: "upload" | "elicit" | "checklist"): void {
    this.store.patch({ view });
  }

  // --- polling -----------------------------------------------------------------

  async tick(): Promise<void> {
    if (!this.store.get().sessionId) return;
    await this.refreshQueue();
    await this.refreshSnapshots();
  }

  startPolling(): void {
    const interval = this.options.pollIntervalMs ?? 2000;
    if (interval <= 0 || this.timer !== null) return;
    this.timer = setInterval(() => {
      void this.tick().catch(() => {
        this.store.patch({ banner: "Lost contact with the service." });
      });
    }, interval);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}

function describeFailure(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.message}`;
  return `Network failure: ${String(error)}`;
}

/** Mount the console into a root element and keep it rendered. */
export function mountConsole(root: HTMLElement, app: ConsoleApp): void {
  const render = () => {
    const state = app.store.get();
    clear(root);

    const nav = el("nav", { class: "tabs" });
    for (const view of ["upload", "elicit", "checklist"] as const) {
      const button = el(
        "button",
        { class: state.view === view ? "tab active" : "tab", "data-view": view },
        [view],
      );
      button.addEventListener("click", () => app.showView(view));
      nav.append(button);
    }
    root.append(nav);

    if (state.banner && state.view !== "upload") {
      root.append(el("div", { class: "banner error" }, [state.banner]));
    }

    if (state.view === "upload") {
      root.append(
        renderUpload(state, {
          onUpload: (source) => void app.uploadModel(source),
          onStartSession: () => void app.startSession(),
          onRetry: () => void app.retryUpload(),
        }),
      );
    } else if (state.view === "elicit") {
      root.append(
        renderElicit(state, {
          onSelect: (id) =>
            void app.selectQuestion(id).then(() => app.refreshSuggestions()),
          onDraftChange: (text) => {
            app.setDraft(text);
            void app.refreshSuggestions();
          },
          onSubmit: (category) => void app.submitAnswer(category),
        }),
      );
    } else {
      root.append(
        renderChecklist(state, {
          onCellClick: (useCase, category) => app.filterCell(useCase, category),
          onExport: (format) => void app.exportChecklist(format),
        }),
      );
    }
  };

  app.store.subscribe(render);
  render();
  app.startPolling();
}
