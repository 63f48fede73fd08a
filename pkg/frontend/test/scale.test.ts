import { describe, expect, it } from "vitest";
import {
  checkColorBounds,
  decadeTicks,
  linearScale,
  logFraction,
  niceTicks,
  viridis,
} from "../src/scale.js";
import { fmtNum, px } from "../src/svg.js";
import { InputError } from "../src/types.js";

describe("scales and ticks", () => {
  it("maps linearly between domains", () => {
    const s = linearScale(0, 10, 100, 200);
    expect(s(0)).toBe(100);
    expect(s(10)).toBe(200);
    expect(s(5)).toBe(150);
  });

  it("places decade ticks across the covered powers of ten", () => {
    expect(decadeTicks(0.1, 100)).toEqual([0.1, 1, 10, 100]);
    expect(decadeTicks(0.2, 99)).toEqual([1, 10]);
  });

  it("places round linear ticks", () => {
    expect(niceTicks(0, 12)).toEqual([0, 2, 4, 6, 8, 10, 12]);
    expect(niceTicks(-50, 50)).toContain(0);
    expect(niceTicks(3, 3).length).toBeGreaterThan(1);
  });
});

describe("color scale", () => {
  it("hits the viridis endpoints and clamps", () => {
    expect(viridis(0)).toBe("#440154");
    expect(viridis(1)).toBe("#fde725");
    expect(viridis(-5)).toBe("#440154");
    expect(viridis(7)).toBe("#fde725");
  });

  it("positions values logarithmically with clamping", () => {
    expect(logFraction(0.1, 0.1, 100)).toBe(0);
    expect(logFraction(100, 0.1, 100)).toBe(1);
    expect(logFraction(0.001, 0.1, 100)).toBe(0);
    expect(logFraction(1e6, 0.1, 100)).toBe(1);
    expect(logFraction(10, 0.1, 100)).toBeCloseTo(2 / 3, 12);
  });

  it("rejects non-positive or unordered bounds", () => {
    expect(() => checkColorBounds(0, 1)).toThrow(InputError);
    expect(() => checkColorBounds(-1, 5)).toThrow(/positive/);
    expect(() => checkColorBounds(5, 5)).toThrow(/vmin < vmax/);
    expect(() => checkColorBounds(5, 1)).toThrow(/vmin < vmax/);
    expect(() => checkColorBounds(1, Infinity)).toThrow(/finite/);
  });
});

describe("formatting", () => {
  it("trims pixel coordinates deterministically", () => {
    expect(px(10)).toBe("10");
    expect(px(10.5)).toBe("10.5");
    expect(px(10.125)).toBe("10.13");
    expect(px(-0.001)).toBe("0");
  });

  it("prints tick labels compactly", () => {
    expect(fmtNum(0.25)).toBe("0.25");
    expect(fmtNum(100)).toBe("100");
    expect(fmtNum(1e7)).toBe("1e7");
    expect(fmtNum(0.30000000000000004)).toBe("0.3");
    expect(fmtNum(Infinity)).toBe("inf");
  });
});
