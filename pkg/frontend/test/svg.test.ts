import { describe, expect, it } from "vitest";

import { fmt, linearScale, logScale, niceTicks, polyline } from "../src/svg.js";

describe("fmt", () => {
  it("is stable and trims", () => {
    expect(fmt(0.1 + 0.2)).toBe("0.3");
    expect(fmt(-0)).toBe("0");
    expect(fmt(123456.789)).toBe("123457");
  });
});

describe("scales", () => {
  it("maps the domain linearly", () => {
    const s = linearScale([0, 10], [100, 200]);
    expect(s(0)).toBe(100);
    expect(s(5)).toBe(150);
    expect(s(10)).toBe(200);
  });

  it("maps decades evenly on the log scale", () => {
    const s = logScale([1e-4, 1], [0, 400]);
    expect(s(1e-4)).toBeCloseTo(0, 9);
    expect(s(1e-2)).toBeCloseTo(200, 9);
    expect(s(1)).toBeCloseTo(400, 9);
    expect(s.ticks()).toEqual([1e-4, 1e-3, 1e-2, 1e-1, 1]);
  });
});

describe("niceTicks", () => {
  it("uses 1-2-5 steps", () => {
    expect(niceTicks(0, 1, 5)).toEqual([0, 0.2, 0.4, 0.6, 0.8, 1]);
    // raw step 0.11 rounds up to the next nice step, 0.2
    expect(niceTicks(0, 0.55, 5)).toEqual([0, 0.2, 0.4]);
  });
});

describe("polyline", () => {
  const sx = linearScale([0, 1], [0, 100]);
  const sy = linearScale([0, 1], [100, 0]);

  it("emits move/line commands", () => {
    expect(polyline([0, 0.5, 1], [0, 1, 0], sx, sy)).toBe(
      "M0 100L50 0L100 100"
    );
  });

  it("lifts the pen across gaps", () => {
    expect(polyline([0, 0.5, 1], [0, NaN, 1], sx, sy)).toBe("M0 100M100 0");
  });
});
