import { describe, expect, it } from "vitest";

import type { LotteryPairs } from "../src/api.js";
import { formatProbability, lotterySegments, totalWidthPct } from "../src/lottery.js";

describe("lottery view model", () => {
  it("keeps one segment per wire branch, in order", () => {
    const wire: LotteryPairs = [
      [0.9, 0.1],
      [0.1, 3.85],
    ];
    const segments = lotterySegments(wire);
    expect(segments).toHaveLength(2);
    expect(segments.map((s) => [s.probability, s.outcome])).toEqual(wire);
  });

  it("widths sum to 100% per option", () => {
    const cases: LotteryPairs[] = [
      [[1.0, 100000]],
      [
        [0.5, 200],
        [0.5, -100],
      ],
      [
        [0.89, 1000000],
        [0.01, 0],
        [0.1, 5000000],
      ],
    ];
    for (const wire of cases) {
      expect(totalWidthPct(lotterySegments(wire))).toBeCloseTo(100, 9);
    }
  });

  it("labels carry the exact probability and payoff", () => {
    const [segment] = lotterySegments([[0.65, 100]]);
    expect(segment!.label).toBe("65% of 100");
    const [fine] = lotterySegments([[0.001, 5499999]]);
    expect(fine!.label).toBe("0.1% of 5,499,999");
  });

  it("keeps fractional payoffs intact", () => {
    const [segment] = lotterySegments([[0.1, 3.85]]);
    expect(segment!.label).toBe("10% of 3.85");
  });

  it("formats probabilities without float dust", () => {
    expect(formatProbability(0.3)).toBe("30%");
    expect(formatProbability(1 / 3)).toBe("33.333333%");
  });
});
