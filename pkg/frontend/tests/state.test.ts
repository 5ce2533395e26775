import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { SessionFlow, type FlowState } from "../src/state.js";

/** Scripted fetch stub: each entry answers one request in order. */
type Scripted =
  | { json: unknown; status?: number }
  | { fail: string };

function scriptedFetch(script: Scripted[]): typeof fetch {
  let cursor = 0;
  return async (input: RequestInfo | URL) => {
    const step = script[cursor];
    cursor += 1;
    if (step === undefined) {
      throw new Error(`unscripted request #${cursor}: ${String(input)}`);
    }
    if ("fail" in step) {
      throw new TypeError(step.fail);
    }
    const status = step.status ?? 200;
    return new Response(JSON.stringify(step.json), {
      status,
      headers: { "content-type": "application/json" },
    });
  };
}

function client(script: Scripted[], retries = 0): ApiClient {
  return new ApiClient("http://service", { fetchFn: scriptedFetch(script), retries, retryDelayMs: 1 });
}

const QUESTION = {
  question_id: "mpl-row-5",
  kind: "pair",
  prompt: "Row 5",
  option_a: [[1.0, 2.0]],
  option_b: [[1.0, 3.85]],
  row: 5,
};

const PROFILE = {
  session_id: "s1",
  protocol: "MPL",
  status: "complete",
  results: { classification: "neutral" },
  risk_class: { category: "Default", score_range: [4, 6] },
  policy_preview: null,
};

describe("session flow state machine", () => {
  it("walks create -> question -> submit -> profile", async () => {
    const flow = new SessionFlow(
      client([
        { json: { session_id: "s1", protocol: "MPL", status: "open", answers: [] } },
        { json: { session_id: "s1", done: false, question: QUESTION, progress: { answered: 0, budget: 20 } } },
        { json: { session_id: "s1", protocol: "MPL", status: "complete", answers: [] } },
        { json: { session_id: "s1", done: true, question: null, progress: { answered: 1, budget: 20 } } },
        { json: PROFILE },
      ]),
    );
    const phases: string[] = [];
    flow.subscribe((state) => phases.push(state.phase));
    await flow.start("MPL");
    expect(flow.current().phase).toBe("question");
    await flow.submit("B");
    const state = flow.current() as Extract<FlowState, { phase: "profile" }>;
    expect(state.phase).toBe("profile");
    expect(state.profile.risk_class!.category).toBe("Default");
    expect(phases).toEqual(["idle", "loading", "question", "profile"]);
  });

  it("resumes mid-session from a stored id, as after a refresh", async () => {
    const flow = new SessionFlow(
      client([
        { json: { session_id: "s1", done: false, question: QUESTION, progress: { answered: 3, budget: 20 } } },
      ]),
      "s1",
    );
    await flow.advance();
    const state = flow.current() as Extract<FlowState, { phase: "question" }>;
    expect(state.question.question_id).toBe("mpl-row-5");
    expect(state.progress.answered).toBe(3);
  });

  it("turns transport failures into a retriable error state", async () => {
    const flow = new SessionFlow(
      client(
        [
          { fail: "connection refused" },
          // after retry: back to the same pending question
          { json: { session_id: "s1", done: false, question: QUESTION, progress: { answered: 2, budget: 20 } } },
        ],
        0,
      ),
      "s1",
    );
    await flow.advance();
    expect(flow.current().phase).toBe("error");
    await flow.retry();
    expect(flow.current().phase).toBe("question");
  });

  it("keeps the question on screen with a notice on validation errors", async () => {
    const flow = new SessionFlow(
      client([
        { json: { session_id: "s1", done: false, question: QUESTION, progress: { answered: 0, budget: 20 } } },
        { json: { code: "invalid_request", message: "invalid answer 'Z'" }, status: 400 },
      ]),
      "s1",
    );
    await flow.advance();
    await flow.submit("Z");
    const state = flow.current() as Extract<FlowState, { phase: "question" }>;
    expect(state.phase).toBe("question");
    expect(state.notice).toBe("invalid answer 'Z'");
  });

  it("retries transport failures before surfacing them", async () => {
    const flow = new SessionFlow(
      client(
        [
          { fail: "reset" },
          { fail: "reset" },
          { json: { session_id: "s1", done: false, question: QUESTION, progress: { answered: 0, budget: 20 } } },
        ],
        2,
      ),
      "s1",
    );
    await flow.advance();
    expect(flow.current().phase).toBe("question");
  });
});
