/** Typed client for the annotation service's JSON-over-HTTP API. */

export interface SessionSummary {
  session_id: string;
  annotator_id: string;
  run_id: string;
  cursor: number;
  total: number;
}

export interface NextItem {
  done: boolean;
  cursor?: number;
  total?: number;
  index?: number;
  model?: string;
  task_id?: string;
  prompt?: string;
  first_frame_url?: string;
  video_url?: string;
  expected_final_url?: string;
}

export interface SubmitResult {
  cursor: number;
  total: number;
}

export interface Progress {
  session_id: string;
  annotator_id: string;
  cursor: number;
  total: number;
  scored: Array<{ index: number; model: string; task_id: string; score: number }>;
}

export interface RunInfo {
  run_id: string;
  total_items: number;
  models: string[];
  reveal_final: boolean;
}

/** Server rejected the request; message comes verbatim from the service. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

/** Network failure before any server verdict; safe to retry. */
export class NetworkError extends Error {}

type FetchFn = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchFn = (...args) => fetch(...args),
  ) {}

  mediaUrl(path: string): string {
    return this.baseUrl + path;
  }

  private async request<T>(method: "GET" | "POST", path: string, body?: unknown): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new NetworkError(err instanceof Error ? err.message : String(err));
    }
    let doc: unknown;
    try {
      doc = await resp.json();
    } catch {
      throw new ApiError(resp.status, `non-JSON reply (HTTP ${resp.status})`);
    }
    if (!resp.ok) {
      const message =
        typeof doc === "object" && doc !== null && "error" in doc
          ? String((doc as { error: unknown }).error)
          : `HTTP ${resp.status}`;
      throw new ApiError(resp.status, message);
    }
    return doc as T;
  }

  createSession(annotatorId: string): Promise<SessionSummary> {
    return this.request<SessionSummary>("POST", "/api/sessions", { annotator_id: annotatorId });
  }

  nextItem(sessionId: string): Promise<NextItem> {
    return this.request<NextItem>("GET", `/api/sessions/${sessionId}/next`);
  }

  submitScore(sessionId: string, index: number, score: number, note: string): Promise<SubmitResult> {
    return this.request<SubmitResult>("POST", `/api/sessions/${sessionId}/scores`, {
      index,
      score,
      note,
    });
  }

  progress(sessionId: string): Promise<Progress> {
    return this.request<Progress>("GET", `/api/sessions/${sessionId}/progress`);
  }

  runInfo(): Promise<RunInfo> {
    return this.request<RunInfo>("GET", "/api/run");
  }
}
