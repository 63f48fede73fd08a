/** Dense indexing of area-map rows, with completeness validation. */
import { GridRow, InputError } from "./types.js";
import { fmtNum } from "./svg.js";

export interface HeatGrid {
  /** Ascending unique cell-center coordinates. */
  xs: number[];
  ys: number[];
  cellW: number;
  cellH: number;
  /** Indexed [iy][ix] following ys and xs. */
  indoor: boolean[][];
  peb: number[][];
}

/** Group rows by epsilon, preserving first-appearance order. */
export function splitByEpsilon(rows: readonly GridRow[]): Map<number, GridRow[]> {
  const groups = new Map<number, GridRow[]>();
  for (const row of rows) {
    let group = groups.get(row.epsilon);
    if (!group) {
      groups.set(row.epsilon, (group = []));
    }
    group.push(row);
  }
  return groups;
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function spacing(values: number[], axis: string): number | undefined {
  if (values.length < 2) {
    return undefined;
  }
  const base = values[1] - values[0];
  for (let i = 2; i < values.length; i++) {
    if (Math.abs(values[i] - values[i - 1] - base) > 1e-6 * Math.abs(base)) {
      throw new InputError(`${axis} grid spacing is not uniform`);
    }
  }
  return base;
}

/** Index one epsilon's rows; rejects duplicates, holes, and ragged spacing. */
export function indexGrid(rows: readonly GridRow[]): HeatGrid {
  if (rows.length === 0) {
    throw new InputError("no grid rows");
  }
  const xs = uniqueSorted(rows.map((r) => r.xM));
  const ys = uniqueSorted(rows.map((r) => r.yM));
  const spacingX = spacing(xs, "x");
  const spacingY = spacing(ys, "y");
  const cellW = spacingX ?? spacingY ?? 1;
  const cellH = spacingY ?? spacingX ?? 1;

  const xIndex = new Map(xs.map((x, i) => [x, i]));
  const yIndex = new Map(ys.map((y, i) => [y, i]));
  const peb: number[][] = ys.map(() => new Array<number>(xs.length).fill(NaN));
  const indoor: boolean[][] = ys.map(() => new Array<boolean>(xs.length).fill(false));
  for (const row of rows) {
    const ix = xIndex.get(row.xM)!;
    const iy = yIndex.get(row.yM)!;
    if (!Number.isNaN(peb[iy][ix])) {
      throw new InputError(`duplicate cell at (${fmtNum(row.xM)}, ${fmtNum(row.yM)})`);
    }
    peb[iy][ix] = row.pebM;
    indoor[iy][ix] = row.indoor;
  }
  for (let iy = 0; iy < ys.length; iy++) {
    for (let ix = 0; ix < xs.length; ix++) {
      if (Number.isNaN(peb[iy][ix])) {
        throw new InputError(`missing cell at (${fmtNum(xs[ix])}, ${fmtNum(ys[iy])})`);
      }
    }
  }
  return { xs, ys, cellW, cellH, indoor, peb };
}

/** x coordinate of the vertical cell boundary left of column ix (ix may be xs.length). */
export function edgeX(grid: HeatGrid, ix: number): number {
  return grid.xs[0] - grid.cellW / 2 + ix * grid.cellW;
}

/** y coordinate of the horizontal cell boundary below row iy (iy may be ys.length). */
export function edgeY(grid: HeatGrid, iy: number): number {
  return grid.ys[0] - grid.cellH / 2 + iy * grid.cellH;
}
