/** Satellite-count sweep figure: one median curve per label on a log y axis. */
import { writeFileSync } from "fs";
import { parseSweepCsv, readCsvFile } from "./csv.js";
import { decadeTicks, linearScale, niceTicks } from "./scale.js";
import { el, esc, fmtNum, svgDocument, textEl } from "./svg.js";
import { FigureSpec, SweepRow } from "./types.js";
import { median } from "./stats.js";

export interface Curve {
  label: string;
  /** [sweep, median across seeds] in ascending sweep order; medians may be infinite. */
  points: Array<[number, number]>;
}

const WIDTH = 660;
const HEIGHT = 420;
const MARGIN = { left: 64, right: 178, top: 16, bottom: 48 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#e377c2",
  "#17becf",
];
const DASHES = ["", "6 3", "2 3", "8 3 2 3"];

/** Median per (label, sweep); labels keep their first-appearance order. */
export function curvesFromRows(rows: readonly SweepRow[]): Curve[] {
  const byLabel = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    let sweeps = byLabel.get(row.label);
    if (!sweeps) {
      byLabel.set(row.label, (sweeps = new Map()));
    }
    let values = sweeps.get(row.sweep);
    if (!values) {
      sweeps.set(row.sweep, (values = []));
    }
    values.push(row.pebM);
  }
  const curves: Curve[] = [];
  for (const [label, sweeps] of byLabel) {
    const points: Array<[number, number]> = [...sweeps].map(([sweep, values]) => [
      sweep,
      median(values),
    ]);
    points.sort((a, b) => a[0] - b[0]);
    curves.push({ label, points });
  }
  return curves;
}

export interface LinesOptions {
  xLabel: string;
  yLabel: string;
  logY: boolean;
}

export interface RenderedSvg {
  svg: string;
  warnings: string[];
}

export function linesSvg(rows: readonly SweepRow[], opts: LinesOptions): RenderedSvg {
  const curves = curvesFromRows(rows);
  const warnings: string[] = [];
  const kept: Array<{ curve: Curve; index: number }> = [];
  curves.forEach((curve, index) => {
    if (curve.points.some(([, m]) => Number.isFinite(m))) {
      kept.push({ curve, index });
    } else {
      warnings.push(`label "${curve.label}": every median is non-finite, curve omitted`);
    }
  });

  const finiteMedians = kept.flatMap(({ curve }) =>
    curve.points.filter(([, m]) => Number.isFinite(m)).map(([, m]) => m),
  );
  const sweeps = kept.flatMap(({ curve }) => curve.points.map(([s]) => s));

  let x0 = sweeps.length ? Math.min(...sweeps) : 0;
  let x1 = sweeps.length ? Math.max(...sweeps) : 1;
  if (x0 === x1) {
    x0 -= 0.5;
    x1 += 0.5;
  } else {
    const pad = (x1 - x0) * 0.03;
    x0 -= pad;
    x1 += pad;
  }
  const sx = linearScale(x0, x1, MARGIN.left, MARGIN.left + PLOT_W);

  const yMin = finiteMedians.length ? Math.min(...finiteMedians) : 0.1;
  const yMax = finiteMedians.length ? Math.max(...finiteMedians) : 100;
  let sy: (v: number) => number;
  let yTicks: number[];
  if (opts.logY) {
    const lo = Math.floor(Math.log10(yMin) + 1e-9);
    let hi = Math.ceil(Math.log10(yMax) - 1e-9);
    if (hi <= lo) {
      hi = lo + 1;
    }
    const sLog = linearScale(lo, hi, MARGIN.top + PLOT_H, MARGIN.top);
    sy = (v) => sLog(Math.log10(v));
    yTicks = decadeTicks(10 ** lo, 10 ** hi);
  } else {
    yTicks = niceTicks(yMin, yMax);
    const lo = Math.min(yTicks[0], yMin);
    const hi = Math.max(yTicks[yTicks.length - 1], yMax);
    sy = linearScale(lo, hi === lo ? lo + 1 : hi, MARGIN.top + PLOT_H, MARGIN.top);
  }

  const uniqueSweeps = [...new Set(sweeps)].sort((a, b) => a - b);
  const xTicks =
    uniqueSweeps.length > 0 &&
    uniqueSweeps.length <= 15 &&
    uniqueSweeps.every((s) => Number.isInteger(s))
      ? uniqueSweeps
      : niceTicks(x0, x1);

  const parts: string[] = [];
  for (const tick of yTicks) {
    const y = sy(tick);
    parts.push(
      el("line", {
        class: "grid",
        x1: MARGIN.left,
        y1: y,
        x2: MARGIN.left + PLOT_W,
        y2: y,
        stroke: "#dddddd",
      }),
      textEl(MARGIN.left - 8, y + 4, fmtNum(tick), { class: "ytick", "text-anchor": "end" }),
    );
  }
  for (const tick of xTicks) {
    const x = sx(tick);
    parts.push(
      el("line", {
        class: "tick",
        x1: x,
        y1: MARGIN.top + PLOT_H,
        x2: x,
        y2: MARGIN.top + PLOT_H + 5,
        stroke: "#333333",
      }),
      textEl(x, MARGIN.top + PLOT_H + 18, fmtNum(tick), { class: "xtick", "text-anchor": "middle" }),
    );
  }
  parts.push(
    el("rect", {
      class: "frame",
      x: MARGIN.left,
      y: MARGIN.top,
      width: PLOT_W,
      height: PLOT_H,
      fill: "none",
      stroke: "#333333",
    }),
  );

  for (const { curve, index } of kept) {
    const color = PALETTE[index % PALETTE.length];
    const dash = DASHES[index % DASHES.length];
    const finite = curve.points.filter(([, m]) => Number.isFinite(m));
    const lineAttrs: Record<string, string | number> = {
      class: "curve",
      points: finite.map(([s, m]) => `${sx(s).toFixed(2)},${sy(m).toFixed(2)}`).join(" "),
      fill: "none",
      stroke: color,
      "stroke-width": 1.8,
    };
    if (dash !== "") {
      lineAttrs["stroke-dasharray"] = dash;
    }
    const markers = finite.map(([s, m]) =>
      el("circle", { class: "pt", cx: sx(s), cy: sy(m), r: 2.6, fill: color }),
    );
    parts.push(
      el("g", { class: "series", "data-label": curve.label }, [el("polyline", lineAttrs), ...markers]),
    );
  }

  const legendX = WIDTH - MARGIN.right + 14;
  const entries = kept.map(({ curve, index }, row) => {
    const y = MARGIN.top + 12 + row * 18;
    const color = PALETTE[index % PALETTE.length];
    const dash = DASHES[index % DASHES.length];
    const sample: Record<string, string | number> = {
      x1: legendX,
      y1: y,
      x2: legendX + 22,
      y2: y,
      stroke: color,
      "stroke-width": 1.8,
    };
    if (dash !== "") {
      sample["stroke-dasharray"] = dash;
    }
    return el("g", { class: "legend-entry" }, [
      el("line", sample),
      textEl(legendX + 28, y + 4, curve.label, {}),
    ]);
  });
  parts.push(el("g", { class: "legend" }, entries));

  parts.push(
    textEl(MARGIN.left + PLOT_W / 2, HEIGHT - 12, opts.xLabel, {
      class: "xlabel",
      "text-anchor": "middle",
    }),
    el(
      "text",
      {
        class: "ylabel",
        x: 16,
        y: MARGIN.top + PLOT_H / 2,
        "text-anchor": "middle",
        transform: `rotate(-90 16 ${(MARGIN.top + PLOT_H / 2).toFixed(2)})`,
      },
      esc(opts.yLabel),
    ),
  );

  return { svg: svgDocument(WIDTH, HEIGHT, parts), warnings };
}

/** Read the sweep CSV named in the figure spec and write one SVG figure. */
export function renderLines(spec: FigureSpec): { paths: string[]; warnings: string[] } {
  const rows = parseSweepCsv(readCsvFile(spec.input));
  const { svg, warnings } = linesSvg(rows, {
    xLabel: spec.xLabel ?? "number of satellites",
    yLabel: spec.yLabel ?? "position error bound [m]",
    logY: spec.logY ?? true,
  });
  writeFileSync(spec.output, svg);
  return { paths: [spec.output], warnings };
}
