import { describe, expect, it } from "vitest";
import { median } from "../src/stats.js";
import { InputError } from "../src/types.js";

describe("median", () => {
  it("returns the middle value for odd-length input", () => {
    expect(median([3, 1, 2])).toBe(2);
    expect(median([5])).toBe(5);
  });

  it("averages the two middle values for even-length input", () => {
    expect(median([4, 1, 3, 2])).toBe(2.5);
    expect(median([1, 2])).toBe(1.5);
  });

  it("sorts infinities high, matching the simulator's aggregation", () => {
    expect(median([1, Infinity, Infinity])).toBe(Infinity);
    expect(median([1, 2, Infinity, Infinity])).toBe(Infinity);
    expect(median([1, 1, 2, Infinity])).toBe(1.5);
    expect(median([5, Infinity])).toBe(Infinity);
  });

  it("does not mutate its input", () => {
    const values = [3, 1, 2];
    median(values);
    expect(values).toEqual([3, 1, 2]);
  });

  it("rejects an empty set", () => {
    expect(() => median([])).toThrow(InputError);
  });
});
