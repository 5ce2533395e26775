/**
 * View model for lotteries: horizontal stacked probability bars with
 * payoff labels.
 *
 * The mapping is lossless: one segment per wire branch, in wire order,
 * carrying the exact probability and payoff. Percent widths are the raw
 * probabilities times 100, so they sum to 100% per option.
 */

import type { LotteryPairs } from "./api.js";

export interface BarSegment {
  probability: number;
  outcome: number;
  widthPct: number;
  label: string;
}

export function lotterySegments(pairs: LotteryPairs): BarSegment[] {
  return pairs.map(([probability, outcome]) => ({
    probability,
    outcome,
    widthPct: probability * 100,
    label: `${formatProbability(probability)} of ${formatMoney(outcome)}`,
  }));
}

export function totalWidthPct(segments: BarSegment[]): number {
  return segments.reduce((sum, segment) => sum + segment.widthPct, 0);
}

/** Probability as a percentage, keeping exact fractional digits. */
export function formatProbability(p: number): string {
  const pct = p * 100;
  const rounded = Math.round(pct * 1e6) / 1e6; // strip float dust only
  return `${trimZeros(rounded)}%`;
}

export function formatMoney(x: number): string {
  if (Number.isInteger(x)) {
    return x.toLocaleString("en-US");
  }
  return trimZeros(Math.round(x * 1e6) / 1e6);
}

function trimZeros(value: number): string {
  return String(value);
}
