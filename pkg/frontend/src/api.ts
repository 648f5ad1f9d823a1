// Typed client for the elicitation service. The console never derives a
// report itself: every table/checklist/coverage byte it shows or exports
// comes back from these calls verbatim.

export interface Diagnostic {
  severity: "error" | "warning";
  code: string;
  message: string;
  line: number | null;
  column: number | null;
}

export interface Question {
  id: string;
  use_case: string;
  text: string;
}

export interface ModelInfo {
  source: string;
  actors: string[];
  use_cases: string[];
  associations: [string, string][];
  questions: Question[];
}

export interface UploadOk {
  ok: true;
  modelId: string;
  warnings: Diagnostic[];
}

export interface UploadRejected {
  ok: false;
  diagnostics: Diagnostic[];
}

export interface SessionInfo {
  session_id: string;
  taxonomy: string[];
}

export interface RecordedAnswer {
  question: string;
  answer: string;
  category: string;
  actor: string;
  recorded_at: string;
}

export interface Suggestion {
  category: string;
  score: number;
}

export interface ChecklistSnapshot {
  rows: string[];
  columns: string[];
  cells: boolean[][];
}

export interface CoverageSnapshot {
  frs_without_questions: string[];
  unanswered_questions: string[];
  unused_categories: string[];
  per_fr_category_count: Record<string, number>;
}

export interface TableRow {
  actor: string;
  use_case: string;
  question_no: string;
  question: string;
  answer: string;
  category: string;
}

export type ReportKind = "table" | "checklist" | "coverage";
export type ExportFormat = "csv" | "md";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function raiseFor(response: Response): Promise<never> {
  let code = "http-error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string = "",
    fetchFn?: FetchLike,
  ) {
    const fn = fetchFn ?? (globalThis.fetch as FetchLike | undefined);
    if (!fn) throw new Error("no fetch implementation available");
    this.fetchFn = (input, init) => fn(input, init);
  }

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.url(path));
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as T;
  }

  async uploadModel(source: string): Promise<UploadOk | UploadRejected> {
    const response = await this.fetchFn(this.url("/models"), {
      method: "POST",
      headers: { "content-type": "text/plain; charset=utf-8" },
      body: source,
    });
    if (response.status === 201) {
      const body = (await response.json()) as {
        model_id: string;
        warnings: Diagnostic[];
      };
      return { ok: true, modelId: body.model_id, warnings: body.warnings };
    }
    if (response.status === 422) {
      const body = (await response.json()) as { diagnostics: Diagnostic[] };
      return { ok: false, diagnostics: body.diagnostics };
    }
    return raiseFor(response);
  }

  getModel(modelId: string): Promise<ModelInfo> {
    return this.getJson(`/models/${encodeURIComponent(modelId)}`);
  }

  async createSession(modelId: string, taxonomy?: string[]): Promise<SessionInfo> {
    const response = await this.fetchFn(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(
        taxonomy ? { model_id: modelId, taxonomy } : { model_id: modelId },
      ),
    });
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as SessionInfo;
  }

  pendingQuestions(sessionId: string): Promise<Question[]> {
    return this.getJson(`/sessions/${encodeURIComponent(sessionId)}/pending`);
  }

  async putAnswer(
    sessionId: string,
    questionId: string,
    body: { answer: string; category: string; actor?: string },
  ): Promise<RecordedAnswer> {
    const response = await this.fetchFn(
      this.url(
        `/sessions/${encodeURIComponent(sessionId)}/answers/${encodeURIComponent(questionId)}`,
      ),
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      },
    );
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as RecordedAnswer;
  }

  async deleteAnswer(sessionId: string, questionId: string): Promise<void> {
    const response = await this.fetchFn(
      this.url(
        `/sessions/${encodeURIComponent(sessionId)}/answers/${encodeURIComponent(questionId)}`,
      ),
      { method: "DELETE" },
    );
    if (!response.ok) await raiseFor(response);
  }

  suggest(sessionId: string, text: string): Promise<Suggestion[]> {
    const params = new URLSearchParams({ text });
    return this.getJson(
      `/sessions/${encodeURIComponent(sessionId)}/suggest?${params}`,
    );
  }

  tableJson(sessionId: string): Promise<TableRow[]> {
    return this.getJson(`/sessions/${encodeURIComponent(sessionId)}/table?format=json`);
  }

  checklistJson(sessionId: string): Promise<ChecklistSnapshot> {
    return this.getJson(
      `/sessions/${encodeURIComponent(sessionId)}/checklist?format=json`,
    );
  }

  coverageJson(sessionId: string): Promise<CoverageSnapshot> {
    return this.getJson(
      `/sessions/${encodeURIComponent(sessionId)}/coverage?format=json`,
    );
  }

  /** Raw report bytes, exactly as the service rendered them. */
  async reportText(
    sessionId: string,
    kind: ReportKind,
    format: ExportFormat,
  ): Promise<string> {
    const response = await this.fetchFn(
      this.url(`/sessions/${encodeURIComponent(sessionId)}/${kind}?format=${format}`),
    );
    if (!response.ok) await raiseFor(response);
    return response.text();
  }
}
