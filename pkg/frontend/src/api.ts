/**
 * Typed client for the riskcal session API.
 *
 * Transport failures are retried with exponential backoff and then
 * surfaced as `NetworkError` so the UI can show a retry banner without
 * losing state. HTTP-level errors carry the service's machine-readable
 * `{code, message}` body as `ApiError` (no retry: the request itself was
 * rejected).
 */

export type LotteryPairs = [number, number][];

export interface WireQuestion {
  question_id: string;
  kind: "pair" | "scale" | "menu";
  prompt: string;
  option_a?: LotteryPairs;
  option_b?: LotteryPairs;
  options?: LotteryPairs[];
  row?: number;
  scale_min?: number;
  scale_max?: number;
}

export interface NextPayload {
  session_id: string;
  done: boolean;
  question: WireQuestion | null;
  progress: { answered: number; budget: number };
}

export interface SessionEnvelope {
  session_id: string;
  protocol: string;
  status: "open" | "complete";
  answers: { question_id: string; chosen: string; timestamp: string }[];
  [key: string]: unknown;
}

export interface PolicyPreview {
  airport_lead_hours: number;
  portfolio: {
    name: string;
    stocks_pct: number;
    bonds_pct: number;
    cash_pct: number;
    annualized_return_pct: number;
    volatility_pct: number;
    max_loss_pct: number;
  };
}

export interface Profile {
  session_id: string;
  protocol: string;
  status: string;
  results: Record<string, unknown>;
  risk_class: { category: string; score_range: [number, number] } | null;
  policy_preview: PolicyPreview | null;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class NetworkError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "NetworkError";
  }
}

export interface ApiClientOptions {
  retries?: number;
  retryDelayMs?: number;
  fetchFn?: typeof fetch;
}

export class ApiClient {
  private readonly retries: number;
  private readonly retryDelayMs: number;
  private readonly fetchFn: typeof fetch;

  constructor(
    readonly baseUrl: string,
    options: ApiClientOptions = {},
  ) {
    this.retries = options.retries ?? 3;
    this.retryDelayMs = options.retryDelayMs ?? 250;
    this.fetchFn = options.fetchFn ?? fetch;
  }

  async createSession(protocol: string, seed?: number): Promise<SessionEnvelope> {
    const body: Record<string, unknown> = { protocol };
    if (seed !== undefined) body.seed = seed;
    return this.request<SessionEnvelope>("POST", "/sessions", body);
  }

  async nextQuestion(sessionId: string): Promise<NextPayload> {
    return this.request<NextPayload>("GET", `/sessions/${sessionId}/next`);
  }

  async submitAnswer(sessionId: string, questionId: string, chosen: string): Promise<SessionEnvelope> {
    return this.request<SessionEnvelope>("POST", `/sessions/${sessionId}/answers`, {
      question_id: questionId,
      chosen,
    });
  }

  async profile(sessionId: string): Promise<Profile> {
    return this.request<Profile>("GET", `/sessions/${sessionId}/profile`);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let lastFailure: unknown;
    for (let attempt = 0; attempt <= this.retries; attempt += 1) {
      if (attempt > 0) {
        await delay(this.retryDelayMs * 2 ** (attempt - 1));
      }
      let response: Response;
      try {
        response = await this.fetchFn(`${this.baseUrl}${path}`, {
          method,
          headers: body === undefined ? undefined : { "content-type": "application/json" },
          body: body === undefined ? undefined : JSON.stringify(body),
        });
      } catch (failure) {
        lastFailure = failure;
        continue; // transport failure: retry
      }
      if (!response.ok) {
        const payload = (await response.json().catch(() => ({}))) as {
          code?: string;
          message?: string;
        };
        throw new ApiError(
          response.status,
          payload.code ?? "http_error",
          payload.message ?? `request failed with status ${response.status}`,
        );
      }
      return (await response.json()) as T;
    }
    throw new NetworkError(`cannot reach ${this.baseUrl}: ${String(lastFailure)}`);
  }
}

function delay(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
