/**
 * Browser bootstrap: wires the session flow to the DOM.
 *
 * The session id lives in the URL query (?session=...), so a refresh
 * rebuilds the controller and resumes at the server's pending question.
 */

import { ApiClient } from "./api.js";
import { renderApp } from "./render.js";
import { SessionFlow } from "./state.js";

export function mount(root: HTMLElement, api: ApiClient, win: Window = window): SessionFlow {
  const params = new URLSearchParams(win.location.search);
  const flow = new SessionFlow(api, params.get("session"));

  flow.subscribe((state) => {
    root.innerHTML = renderApp(state);
    if (flow.sessionId !== null) {
      const url = new URL(win.location.href);
      if (url.searchParams.get("session") !== flow.sessionId) {
        url.searchParams.set("session", flow.sessionId);
        win.history.replaceState(null, "", url.toString());
      }
    }
  });

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement | null;
    if (target === null) return;
    const answer = target.closest<HTMLElement>("[data-answer]");
    if (answer?.dataset.answer !== undefined) {
      void flow.submit(answer.dataset.answer);
      return;
    }
    const protocol = target.closest<HTMLElement>("[data-protocol]");
    if (protocol?.dataset.protocol !== undefined) {
      void flow.start(protocol.dataset.protocol);
      return;
    }
    if (target.closest("[data-retry]") !== null) {
      void flow.retry();
      return;
    }
    if (target.closest("[data-restart]") !== null) {
      const url = new URL(win.location.href);
      url.searchParams.delete("session");
      win.location.href = url.toString();
    }
  });

  if (flow.sessionId !== null) {
    void flow.advance(); // refresh-safe resume
  }
  return flow;
}

if (typeof document !== "undefined" && document.getElementById("app") !== null) {
  const root = document.getElementById("app") as HTMLElement;
  mount(root, new ApiClient(""));
}
