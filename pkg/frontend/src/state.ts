/**
 * Session-flow state machine.
 *
 * Mirrors the server's session lifecycle: create (or resume by id) ->
 * fetch next question -> submit answer -> ... -> fetch profile. The
 * server is the single source of truth; on refresh the controller is
 * rebuilt from the session id in the URL and re-fetches the pending
 * question. Transport failures become a retry banner that preserves the
 * session; validation rejections become an inline notice on the current
 * question.
 */

import {
  ApiClient,
  ApiError,
  NetworkError,
  type NextPayload,
  type Profile,
  type WireQuestion,
} from "./api.js";

export type FlowState =
  | { phase: "idle" }
  | { phase: "loading"; detail: string }
  | {
      phase: "question";
      question: WireQuestion;
      progress: { answered: number; budget: number };
      notice: string | null;
    }
  | { phase: "profile"; profile: Profile }
  | { phase: "error"; message: string };

export type Listener = (state: FlowState) => void;

export class SessionFlow {
  private state: FlowState = { phase: "idle" };
  private listeners: Listener[] = [];
  sessionId: string | null;

  constructor(
    private readonly api: ApiClient,
    sessionId: string | null = null,
  ) {
    this.sessionId = sessionId;
  }

  current(): FlowState {
    return this.state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.state);
  }

  private transition(state: FlowState): void {
    this.state = state;
    for (const listener of this.listeners) {
      listener(state);
    }
  }

  /** Create a fresh session, or resume the current one after a refresh. */
  async start(protocol = "MPL"): Promise<void> {
    this.transition({ phase: "loading", detail: "starting session" });
    try {
      if (this.sessionId === null) {
        const envelope = await this.api.createSession(protocol);
        this.sessionId = envelope.session_id;
      }
      await this.advance();
    } catch (failure) {
      this.fail(failure);
    }
  }

  /** Fetch the pending question, or the profile once the session is done. */
  async advance(): Promise<void> {
    if (this.sessionId === null) {
      this.transition({ phase: "error", message: "no session to resume" });
      return;
    }
    try {
      const next: NextPayload = await this.api.nextQuestion(this.sessionId);
      if (next.done || next.question === null) {
        const profile = await this.api.profile(this.sessionId);
        this.transition({ phase: "profile", profile });
      } else {
        this.transition({
          phase: "question",
          question: next.question,
          progress: next.progress,
          notice: null,
        });
      }
    } catch (failure) {
      this.fail(failure);
    }
  }

  async submit(chosen: string): Promise<void> {
    const state = this.state;
    if (state.phase !== "question" || this.sessionId === null) {
      return;
    }
    try {
      await this.api.submitAnswer(this.sessionId, state.question.question_id, chosen);
      await this.advance();
    } catch (failure) {
      if (failure instanceof ApiError && (failure.status === 400 || failure.status === 422)) {
        // Rejected input: keep the question on screen with an inline note.
        this.transition({ ...state, notice: failure.message });
        return;
      }
      this.fail(failure);
    }
  }

  /** Re-fetch after a transport failure; session state lives on the server. */
  async retry(): Promise<void> {
    if (this.sessionId === null) {
      this.transition({ phase: "idle" });
      return;
    }
    await this.advance();
  }

  private fail(failure: unknown): void {
    if (failure instanceof NetworkError) {
      this.transition({ phase: "error", message: failure.message });
    } else if (failure instanceof ApiError) {
      this.transition({ phase: "error", message: `${failure.code}: ${failure.message}` });
    } else {
      this.transition({ phase: "error", message: String(failure) });
    }
  }
}
