import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, describe, expect, it } from "vitest";
import { parseSweepCsv } from "../src/csv.js";
import { curvesFromRows, linesSvg, renderLines } from "../src/lines.js";
import { count, fixture, makeSweepCsv } from "./helpers.js";

const tmp = mkdtempSync(join(tmpdir(), "pebplot-lines-"));
afterAll(() => rmSync(tmp, { recursive: true, force: true }));

const fixtureRows = () =>
  parseSweepCsv(readFileSync(fixture("fixture_sweep_peb.csv"), "utf8"));

describe("curvesFromRows", () => {
  it("computes per-(label, sweep) medians in first-appearance label order", () => {
    const rows = parseSweepCsv(
      "label,sweep,seed,peb_m\nzeta,2,0,4\nzeta,1,0,8\nalpha,1,0,1\nzeta,1,1,10\n",
    );
    const curves = curvesFromRows(rows);
    expect(curves.map((c) => c.label)).toEqual(["zeta", "alpha"]);
    expect(curves[0].points).toEqual([
      [1, 9],
      [2, 4],
    ]);
    expect(curves[1].points).toEqual([[1, 1]]);
  });

  it("matches the simulator's medians on the committed fixture within 1e-12", () => {
    const expected = JSON.parse(readFileSync(fixture("sweep_medians.json"), "utf8")) as Record<
      string,
      Record<string, number | "inf">
    >;
    const curves = curvesFromRows(fixtureRows());
    let checked = 0;
    for (const curve of curves) {
      for (const [sweep, med] of curve.points) {
        const want = expected[curve.label][String(sweep)];
        if (want === "inf") {
          expect(med).toBe(Infinity);
        } else {
          expect(Math.abs(med - want)).toBeLessThanOrEqual(1e-12 * Math.abs(want));
        }
        checked += 1;
      }
    }
    expect(checked).toBe(6);
  });

  it("matches the medians printed in the simulator's summary lines", () => {
    // The summary prints nine significant digits, hence the 1e-8 slack.
    const summary = readFileSync(fixture("sweep_summary.txt"), "utf8");
    const printed = [...summary.matchAll(/^(\w+): median peb (\S+) m at (\d+) satellites$/gm)];
    expect(printed.length).toBe(2);
    const curves = curvesFromRows(fixtureRows());
    for (const [, label, value, sweep] of printed) {
      const curve = curves.find((c) => c.label === label)!;
      const med = curve.points.find(([s]) => s === Number(sweep))![1];
      expect(Math.abs(med - Number(value))).toBeLessThanOrEqual(1e-8 * Number(value));
    }
  });

  it("leaves the input rows untouched", () => {
    const rows = fixtureRows().map((r) => Object.freeze({ ...r }));
    const frozen = Object.freeze([...rows]);
    expect(() => curvesFromRows(frozen)).not.toThrow();
  });
});

describe("linesSvg", () => {
  it("draws one curve per label with one marker per sweep point", () => {
    const rows = parseSweepCsv(makeSweepCsv(["a", "b", "c"], [...Array(12).keys()].map((i) => i + 1), [0, 1]));
    const { svg, warnings } = linesSvg(rows, { xLabel: "n", yLabel: "peb", logY: true });
    expect(warnings).toEqual([]);
    expect(count(svg, /class="series"/g)).toBe(3);
    expect(count(svg, /class="pt"/g)).toBe(36);
    expect(count(svg, /class="legend-entry"/g)).toBe(3);
  });

  it("omits a curve whose medians are all non-finite, with a warning", () => {
    const rows = parseSweepCsv(
      "label,sweep,seed,peb_m\ngood,1,0,5\ngood,2,0,6\nbad,1,0,inf\nbad,2,0,inf\n",
    );
    const { svg, warnings } = linesSvg(rows, { xLabel: "n", yLabel: "peb", logY: true });
    expect(count(svg, /class="series"/g)).toBe(1);
    expect(count(svg, /class="legend-entry"/g)).toBe(1);
    expect(svg).not.toContain("bad");
    expect(warnings).toHaveLength(1);
    expect(warnings[0]).toContain('"bad"');
  });

  it("skips only the non-finite points of a partly singular curve", () => {
    const rows = parseSweepCsv(
      "label,sweep,seed,peb_m\na,1,0,inf\na,2,0,5\na,3,0,4\n",
    );
    const { svg, warnings } = linesSvg(rows, { xLabel: "n", yLabel: "peb", logY: true });
    expect(warnings).toEqual([]);
    expect(count(svg, /class="series"/g)).toBe(1);
    expect(count(svg, /class="pt"/g)).toBe(2);
  });

  it("labels the log axis with decades covering the data", () => {
    const { svg } = linesSvg(fixtureRows(), { xLabel: "n", yLabel: "peb", logY: true });
    expect(count(svg, /class="ytick"/g)).toBeGreaterThanOrEqual(4);
    expect(svg).toContain(">100<");
    expect(svg).toContain(">1e7<");
  });

  it("supports a linear y axis as well", () => {
    const rows = parseSweepCsv(makeSweepCsv(["a"], [1, 2, 3], [0]));
    const { svg } = linesSvg(rows, { xLabel: "n", yLabel: "peb", logY: false });
    expect(count(svg, /class="series"/g)).toBe(1);
  });

  it("keeps legend entries in first-appearance order, not sorted", () => {
    const rows = parseSweepCsv(
      "label,sweep,seed,peb_m\nzeta,1,0,5\nzeta,2,0,6\nalpha,1,0,1\nalpha,2,0,2\n",
    );
    const { svg } = linesSvg(rows, { xLabel: "n", yLabel: "peb", logY: true });
    const legend = svg.slice(svg.indexOf('class="legend"'));
    expect(legend.indexOf(">zeta<")).toBeGreaterThan(-1);
    expect(legend.indexOf(">zeta<")).toBeLessThan(legend.indexOf(">alpha<"));
  });

  it("renders byte-identically for identical input", () => {
    const rows = fixtureRows();
    const first = linesSvg(rows, { xLabel: "n", yLabel: "peb", logY: true });
    const second = linesSvg(rows, { xLabel: "n", yLabel: "peb", logY: true });
    expect(second.svg).toBe(first.svg);
  });
});

describe("renderLines", () => {
  it("writes the same bytes on a re-render of the same CSV", () => {
    const out1 = join(tmp, "sweep1.svg");
    const out2 = join(tmp, "sweep2.svg");
    const spec = { kind: "lines" as const, input: fixture("fixture_sweep_peb.csv"), output: out1 };
    renderLines(spec);
    renderLines({ ...spec, output: out2 });
    expect(readFileSync(out1, "utf8")).toBe(readFileSync(out2, "utf8"));
  });

  it("rejects a grid CSV by header", () => {
    const bad = join(tmp, "grid_header.csv");
    writeFileSync(bad, "x_m,y_m,indoor,epsilon,peb_m\n0,0,0,0.5,1\n");
    expect(() =>
      renderLines({ kind: "lines", input: bad, output: join(tmp, "never.svg") }),
    ).toThrow(/bad CSV header/);
  });
});
