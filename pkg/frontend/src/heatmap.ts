/** Area-map figure: log-color PEB heatmap with outlines, markers, and a colorbar. */
import { writeFileSync } from "fs";
import { inferPanelMarkers, outlineSegments } from "./buildings.js";
import { parseGridCsv, readCsvFile } from "./csv.js";
import { HeatGrid, edgeX, edgeY, indexGrid, splitByEpsilon } from "./grid.js";
import { checkColorBounds, decadeTicks, linearScale, logFraction, niceTicks, viridis } from "./scale.js";
import { el, fmtNum, px, svgDocument, textEl } from "./svg.js";
import { FigureSpec, GridRow, InputError } from "./types.js";

/** Fill for cells whose bound is infinite (singular geometry). */
export const INF_COLOR = "#b4b4b4";

const MARGIN = { left: 64, right: 150, top: 28, bottom: 48 };
const PLOT_W = 440;
const PLOT_H = 440;
const WIDTH = MARGIN.left + PLOT_W + MARGIN.right;
const HEIGHT = MARGIN.top + PLOT_H + MARGIN.bottom;

export interface HeatmapOptions {
  vmin: number;
  vmax: number;
  xLabel: string;
  yLabel: string;
  /** Overrides marker inference when given. */
  risMarkers?: Array<[number, number]>;
}

export interface HeatmapSvg {
  svg: string;
  warnings: string[];
}

export function heatmapSvg(rows: readonly GridRow[], epsilon: number, opts: HeatmapOptions): HeatmapSvg {
  checkColorBounds(opts.vmin, opts.vmax);
  const grid: HeatGrid = indexGrid(rows);
  const nx = grid.xs.length;
  const ny = grid.ys.length;

  const sx = linearScale(edgeX(grid, 0), edgeX(grid, nx), MARGIN.left, MARGIN.left + PLOT_W);
  const sy = linearScale(edgeY(grid, 0), edgeY(grid, ny), MARGIN.top + PLOT_H, MARGIN.top);

  const cells: string[] = [];
  for (let iy = 0; iy < ny; iy++) {
    for (let ix = 0; ix < nx; ix++) {
      const value = grid.peb[iy][ix];
      const left = sx(edgeX(grid, ix));
      const top = sy(edgeY(grid, iy + 1));
      const attrs: Record<string, string | number> = {
        class: Number.isFinite(value) ? "cell" : "cell inf",
        x: left,
        y: top,
        width: sx(edgeX(grid, ix + 1)) - left,
        height: sy(edgeY(grid, iy)) - top,
        fill: Number.isFinite(value) ? viridis(logFraction(value, opts.vmin, opts.vmax)) : INF_COLOR,
      };
      cells.push(el("rect", attrs));
    }
  }

  const parts: string[] = [el("g", { class: "cells", "shape-rendering": "crispEdges" }, cells)];

  const outline = outlineSegments(grid);
  if (outline.length > 0) {
    const d = outline
      .map(
        ([ax, ay, bx, by]) =>
          `M${px(sx(ax))} ${px(sy(ay))}L${px(sx(bx))} ${px(sy(by))}`,
      )
      .join("");
    parts.push(
      el("path", { class: "building", d, fill: "none", stroke: "#ffffff", "stroke-width": 2 }),
    );
  }

  const warnings: string[] = [];
  let markers = opts.risMarkers;
  if (!markers) {
    const inferred = inferPanelMarkers(grid);
    markers = inferred.markers;
    warnings.push(...inferred.warnings);
  }
  for (const [mx, my] of markers) {
    const cx = sx(mx);
    const cy = sy(my);
    const s = 7;
    const points = `${px(cx)},${px(cy - s)} ${px(cx + s)},${px(cy)} ${px(cx)},${px(cy + s)} ${px(cx - s)},${px(cy)}`;
    parts.push(
      el("polygon", { class: "ris", points, fill: "#ff4136", stroke: "#7f1d1d", "stroke-width": 1 }),
    );
  }

  for (const tick of niceTicks(edgeX(grid, 0), edgeX(grid, nx))) {
    const x = sx(tick);
    parts.push(
      el("line", { class: "tick", x1: x, y1: MARGIN.top + PLOT_H, x2: x, y2: MARGIN.top + PLOT_H + 5, stroke: "#333333" }),
      textEl(x, MARGIN.top + PLOT_H + 18, fmtNum(tick), { class: "xtick", "text-anchor": "middle" }),
    );
  }
  for (const tick of niceTicks(edgeY(grid, 0), edgeY(grid, ny))) {
    const y = sy(tick);
    parts.push(
      el("line", { class: "tick", x1: MARGIN.left - 5, y1: y, x2: MARGIN.left, y2: y, stroke: "#333333" }),
      textEl(MARGIN.left - 8, y + 4, fmtNum(tick), { class: "ytick", "text-anchor": "end" }),
    );
  }
  parts.push(
    el("rect", { class: "frame", x: MARGIN.left, y: MARGIN.top, width: PLOT_W, height: PLOT_H, fill: "none", stroke: "#333333" }),
    textEl(MARGIN.left + PLOT_W, MARGIN.top - 8, `epsilon = ${fmtNum(epsilon)}`, { class: "note", "text-anchor": "end" }),
    textEl(MARGIN.left + PLOT_W / 2, HEIGHT - 12, opts.xLabel, { class: "xlabel", "text-anchor": "middle" }),
    el(
      "text",
      { class: "ylabel", x: 16, y: MARGIN.top + PLOT_H / 2, "text-anchor": "middle", transform: `rotate(-90 16 ${(MARGIN.top + PLOT_H / 2).toFixed(2)})` },
      opts.yLabel,
    ),
  );

  // Colorbar on the right: 64 steps of the log color scale plus decade ticks.
  const barX = WIDTH - MARGIN.right + 28;
  const barW = 16;
  const steps = 64;
  const barParts: string[] = [];
  for (let i = 0; i < steps; i++) {
    const t0 = i / steps;
    const t1 = (i + 1) / steps;
    barParts.push(
      el("rect", {
        class: "cbar-step",
        x: barX,
        y: MARGIN.top + PLOT_H * (1 - t1),
        width: barW,
        height: PLOT_H / steps + 0.5,
        fill: viridis((t0 + t1) / 2),
      }),
    );
  }
  const tickValues = [opts.vmin, ...decadeTicks(opts.vmin, opts.vmax), opts.vmax].filter(
    (v, i, arr) => arr.findIndex((u) => Math.abs(u - v) <= 1e-9 * v) === i,
  );
  for (const value of tickValues) {
    const y = MARGIN.top + PLOT_H * (1 - logFraction(value, opts.vmin, opts.vmax));
    barParts.push(
      el("line", { class: "cbar-tick", x1: barX + barW, y1: y, x2: barX + barW + 4, y2: y, stroke: "#333333" }),
      textEl(barX + barW + 7, y + 4, fmtNum(value), {}),
    );
  }
  barParts.push(textEl(barX + barW / 2, MARGIN.top - 8, "peb [m]", { class: "cbar-title", "text-anchor": "middle" }));
  parts.push(el("g", { class: "colorbar" }, barParts));

  return { svg: svgDocument(WIDTH, HEIGHT, parts), warnings };
}

function withSuffix(path: string, suffix: string): string {
  const dot = path.lastIndexOf(".");
  const slash = Math.max(path.lastIndexOf("/"), path.lastIndexOf("\\"));
  if (dot <= slash) {
    return path + suffix;
  }
  return path.slice(0, dot) + suffix + path.slice(dot);
}

/** Read the grid CSV named in the figure spec and write one SVG per epsilon. */
export function renderHeatmap(spec: FigureSpec): { paths: string[]; warnings: string[] } {
  const vmin = spec.vmin ?? 0.1;
  const vmax = spec.vmax ?? 100;
  checkColorBounds(vmin, vmax);
  const rows = parseGridCsv(readCsvFile(spec.input));
  const groups = splitByEpsilon(rows);
  if (groups.size === 0) {
    throw new InputError("no data rows");
  }
  const paths: string[] = [];
  const warnings: string[] = [];
  for (const [epsilon, groupRows] of groups) {
    const out =
      groups.size > 1 ? withSuffix(spec.output, `_eps${fmtNum(epsilon)}`) : spec.output;
    const { svg, warnings: w } = heatmapSvg(groupRows, epsilon, {
      vmin,
      vmax,
      xLabel: spec.xLabel ?? "x [m]",
      yLabel: spec.yLabel ?? "y [m]",
      risMarkers: spec.risMarkers,
    });
    writeFileSync(out, svg);
    paths.push(out);
    warnings.push(...w);
  }
  return { paths, warnings };
}
