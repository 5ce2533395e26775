/**
 * Pure rendering: FlowState -> HTML string.
 *
 * Every number shown is taken verbatim from an API payload; nothing is
 * recomputed on the client. One question per screen, lotteries drawn as
 * horizontal stacked probability bars with payoff labels.
 */

import type { LotteryPairs, Profile, WireQuestion } from "./api.js";
import { lotterySegments } from "./lottery.js";
import type { FlowState } from "./state.js";

const PROTOCOLS = ["MPL", "RandomPairs", "OrderedMenu", "GeneralRisk", "Allais"];

export function renderApp(state: FlowState): string {
  switch (state.phase) {
    case "idle":
      return renderStart();
    case "loading":
      return `<p class="loading">${escapeHtml(state.detail)}…</p>`;
    case "question":
      return renderQuestion(state.question, state.progress, state.notice);
    case "profile":
      return renderProfile(state.profile);
    case "error":
      return renderErrorBanner(state.message);
  }
}

export function renderStart(): string {
  const buttons = PROTOCOLS.map(
    (p) => `<button data-protocol="${p}">${p}</button>`,
  ).join("\n");
  return `
  <section class="start">
    <h1>Risk-attitude session</h1>
    <p>Pick a protocol to begin.</p>
    <div class="protocols">${buttons}</div>
  </section>`;
}

export function renderLotteryBar(pairs: LotteryPairs, title: string): string {
  const segments = lotterySegments(pairs);
  const bar = segments
    .map(
      (segment, i) =>
        `<div class="segment segment-${i % 6}" style="width:${segment.widthPct}%">` +
        `<span>${escapeHtml(segment.label)}</span></div>`,
    )
    .join("");
  const caption = segments.map((segment) => escapeHtml(segment.label)).join(" · ");
  return `
  <div class="lottery">
    <div class="lottery-title">${escapeHtml(title)}</div>
    <div class="bar" role="img" aria-label="${escapeHtml(caption)}">${bar}</div>
    <div class="caption">${caption}</div>
  </div>`;
}

export function renderQuestion(
  question: WireQuestion,
  progress: { answered: number; budget: number },
  notice: string | null,
): string {
  const header = `
  <header>
    <span class="progress" data-progress>question ${progress.answered + 1} · budget ${progress.budget}</span>
  </header>`;
  const note = notice ? `<p class="notice" data-notice>${escapeHtml(notice)}</p>` : "";
  let body = "";
  if (question.kind === "pair" && question.option_a && question.option_b) {
    body = `
    ${renderLotteryBar(question.option_a, "Option A")}
    ${renderLotteryBar(question.option_b, "Option B")}
    <div class="answers">
      <button data-answer="A">Choose A</button>
      <button data-answer="B">Choose B</button>
    </div>`;
  } else if (question.kind === "scale") {
    const lo = question.scale_min ?? 0;
    const hi = question.scale_max ?? 10;
    const buttons = [];
    for (let v = lo; v <= hi; v += 1) {
      buttons.push(`<button data-answer="${v}">${v}</button>`);
    }
    body = `<div class="scale">${buttons.join("")}</div>`;
  } else if (question.kind === "menu" && question.options) {
    body = question.options
      .map(
        (pairs, i) =>
          `${renderLotteryBar(pairs, `Option ${i}`)}<button data-answer="${i}">Pick option ${i}</button>`,
      )
      .join("\n");
  }
  return `
  <section class="question" data-question-id="${escapeHtml(question.question_id)}">
    ${header}
    <h2>${escapeHtml(question.prompt)}</h2>
    ${note}
    ${body}
  </section>`;
}

export function renderProfile(profile: Profile): string {
  const rows: string[] = [];
  const results = profile.results ?? {};
  if (results["classification"] !== undefined) {
    rows.push(row("classification", String(results["classification"])));
  }
  if (results["switch_row"] !== undefined) {
    rows.push(row("switch row", String(results["switch_row"] ?? "never")));
  }
  if (results["score"] !== undefined) {
    rows.push(row("reported score", String(results["score"])));
  }
  if (results["eu_consistent"] !== undefined) {
    rows.push(
      row(
        "expected-utility consistent",
        `${results["eu_consistent"]} (pattern ${String(results["pattern"])})`,
      ),
    );
  }
  const fit = results["fit"] as
    | { model: { family: string; params: Record<string, number> }; choice_sharpness: number }
    | undefined;
  if (fit !== undefined) {
    const params = Object.entries(fit.model.params)
      .map(([name, value]) => `${name}=${value}`)
      .join(", ");
    rows.push(row("fitted model", `${fit.model.family} (${params})`));
    rows.push(row("choice sharpness", String(fit.choice_sharpness)));
  }
  if (profile.risk_class !== null) {
    rows.push(
      row(
        "risk class",
        `<strong data-risk-class>${escapeHtml(profile.risk_class.category)}</strong>` +
          ` (scores ${profile.risk_class.score_range[0]}–${profile.risk_class.score_range[1]})`,
      ),
    );
  }
  if (profile.policy_preview !== null) {
    const preview = profile.policy_preview;
    rows.push(row("airport policy", `arrive ${preview.airport_lead_hours} h before international flights`));
    rows.push(
      row(
        "portfolio pick",
        `${escapeHtml(preview.portfolio.name)} — ${preview.portfolio.stocks_pct}% stocks / ` +
          `${preview.portfolio.bonds_pct}% bonds / ${preview.portfolio.cash_pct}% cash`,
      ),
    );
  }
  return `
  <section class="profile" data-session-id="${escapeHtml(profile.session_id)}">
    <h2>Your risk profile</h2>
    <dl>${rows.join("")}</dl>
    <button data-restart>Start another session</button>
  </section>`;
}

// `detail` is caller-built markup; callers escape any free-form strings.
function row(term: string, detail: string): string {
  return `<dt>${escapeHtml(term)}</dt><dd>${detail}</dd>`;
}

export function renderErrorBanner(message: string): string {
  return `
  <section class="error-banner" data-error>
    <p>Connection trouble: ${escapeHtml(message)}</p>
    <p>Your answers are saved on the server.</p>
    <button data-retry>Retry</button>
  </section>`;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
