import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { parseGridCsv, parseSweepCsv, readCsvFile } from "../src/csv.js";
import { InputError } from "../src/types.js";
import { fixture } from "./helpers.js";

describe("parseSweepCsv", () => {
  it("reads rows in file order and maps inf to Infinity", () => {
    const rows = parseSweepCsv(
      "label,sweep,seed,peb_m\nb,2,0,1.5\na,1,1,inf\n",
    );
    expect(rows).toHaveLength(2);
    expect(rows[0]).toEqual({ label: "b", sweep: 2, seed: 0, pebM: 1.5 });
    expect(rows[1].label).toBe("a");
    expect(rows[1].pebM).toBe(Infinity);
  });

  it("tolerates CRLF line endings", () => {
    const rows = parseSweepCsv("label,sweep,seed,peb_m\r\na,1,0,2\r\n");
    expect(rows).toHaveLength(1);
    expect(rows[0].pebM).toBe(2);
  });

  it("rejects a wrong header naming both headers", () => {
    expect(() => parseSweepCsv("label,sweep,peb_m\na,1,2\n")).toThrow(/bad CSV header/);
    expect(() => parseSweepCsv("label,sweep,peb_m\na,1,2\n")).toThrow(/label,sweep,seed,peb_m/);
  });

  it("rejects an empty file", () => {
    expect(() => parseSweepCsv("")).toThrow(/missing header/);
  });

  it("rejects wrong field counts with the line number", () => {
    expect(() => parseSweepCsv("label,sweep,seed,peb_m\na,1,0\n")).toThrow(/line 2/);
  });

  it("rejects non-numeric and non-positive bounds", () => {
    expect(() => parseSweepCsv("label,sweep,seed,peb_m\na,1,0,soon\n")).toThrow(InputError);
    expect(() => parseSweepCsv("label,sweep,seed,peb_m\na,1,0,0\n")).toThrow(/positive/);
    expect(() => parseSweepCsv("label,sweep,seed,peb_m\na,1,0,-3\n")).toThrow(/positive/);
  });

  it("rejects a non-finite sweep column", () => {
    expect(() => parseSweepCsv("label,sweep,seed,peb_m\na,inf,0,1\n")).toThrow(/finite/);
  });

  it("reads the committed sweep fixture", () => {
    const rows = parseSweepCsv(readFileSync(fixture("fixture_sweep_peb.csv"), "utf8"));
    expect(rows).toHaveLength(24);
    expect(new Set(rows.map((r) => r.label))).toEqual(new Set(["relay_indoor", "bare_outdoor"]));
    expect(rows.some((r) => r.pebM === Infinity)).toBe(true);
  });
});

describe("parseGridCsv", () => {
  it("reads cells with boolean indoor flags", () => {
    const rows = parseGridCsv(
      "x_m,y_m,indoor,epsilon,peb_m\n-5,5,1,0.5,2.25\n5,5,0,0.5,inf\n",
    );
    expect(rows).toHaveLength(2);
    expect(rows[0]).toEqual({ xM: -5, yM: 5, indoor: true, epsilon: 0.5, pebM: 2.25 });
    expect(rows[1].indoor).toBe(false);
    expect(rows[1].pebM).toBe(Infinity);
  });

  it("rejects indoor flags other than 0 and 1", () => {
    expect(() => parseGridCsv("x_m,y_m,indoor,epsilon,peb_m\n0,0,2,0.5,1\n")).toThrow(/indoor/);
    expect(() => parseGridCsv("x_m,y_m,indoor,epsilon,peb_m\n0,0,true,0.5,1\n")).toThrow(/indoor/);
  });

  it("rejects epsilon outside [0, 1]", () => {
    expect(() => parseGridCsv("x_m,y_m,indoor,epsilon,peb_m\n0,0,0,1.5,1\n")).toThrow(/epsilon/);
  });

  it("rejects a sweep header on the grid reader", () => {
    expect(() => parseGridCsv("label,sweep,seed,peb_m\na,1,0,1\n")).toThrow(/bad CSV header/);
  });

  it("reads the committed area fixture", () => {
    const rows = parseGridCsv(readFileSync(fixture("fixture_area_peb.csv"), "utf8"));
    expect(rows).toHaveLength(200);
    expect(rows.filter((r) => r.indoor)).toHaveLength(24);
    expect(new Set(rows.map((r) => r.epsilon))).toEqual(new Set([0.3, 0.7]));
  });
});

describe("readCsvFile", () => {
  it("wraps unreadable paths in InputError", () => {
    expect(() => readCsvFile(fixture("no_such_file.csv"))).toThrow(InputError);
    expect(() => readCsvFile(fixture("no_such_file.csv"))).toThrow(/cannot read/);
  });
});
