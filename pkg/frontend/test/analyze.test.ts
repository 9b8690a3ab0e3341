import { describe, expect, it } from "vitest";

import { crossingPosition, groupSpectrum, peakPosition } from "../src/analyze.js";

describe("groupSpectrum", () => {
  it("pivots long-format rows into labeled curves", () => {
    const s = groupSpectrum(
      [0, 0, 1, 1],
      ["1-", "1+", "1-", "1+"],
      [0.4, 0.6, 0.3, 0.7]
    );
    expect(s.x).toEqual([0, 1]);
    expect(s.energyByLabel.get("1-")).toEqual([0.4, 0.3]);
    expect(s.energyByLabel.get("1+")).toEqual([0.6, 0.7]);
  });

  it("ignores unlabeled rows", () => {
    const s = groupSpectrum([0, 0], ["", "1-"], [1.0, 2.0]);
    expect([...s.energyByLabel.keys()]).toEqual(["1-"]);
  });
});

describe("crossingPosition", () => {
  it("interpolates the sign change exactly for straight lines", () => {
    // E_a = 1 - x, E_b = x: crossing at exactly 0.5
    const x = [0, 0.25, 0.75, 1.0];
    const s = groupSpectrum(
      x.flatMap((v) => [v, v]),
      x.flatMap(() => ["a", "b"]),
      x.flatMap((v) => [1 - v, v])
    );
    expect(crossingPosition(s, "a", "b")).toBeCloseTo(0.5, 12);
  });

  it("returns null without a sign change", () => {
    const x = [0, 1];
    const s = groupSpectrum(
      x.flatMap((v) => [v, v]),
      x.flatMap(() => ["a", "b"]),
      x.flatMap((v) => [2 + v, v])
    );
    expect(crossingPosition(s, "a", "b")).toBeNull();
  });

  it("returns null for unknown labels", () => {
    const s = groupSpectrum([0], ["a"], [1]);
    expect(crossingPosition(s, "a", "zz")).toBeNull();
  });
});

describe("peakPosition", () => {
  it("recovers a parabola vertex off the grid", () => {
    const x = [0, 1, 2, 3, 4];
    const y = x.map((v) => 5 - (v - 2.3) ** 2);
    const peak = peakPosition(x, y);
    expect(peak.x).toBeCloseTo(2.3, 10);
    expect(peak.y).toBeCloseTo(5, 10);
  });

  it("keeps endpoint maxima on the grid", () => {
    const peak = peakPosition([0, 1, 2], [3, 2, 1]);
    expect(peak).toEqual({ x: 0, y: 3 });
  });
});
