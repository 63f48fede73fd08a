/** Row shapes for the two CSV schemas, the figure specification, and errors. */

/** One row of a satellite-count sweep CSV (`label,sweep,seed,peb_m`). */
export interface SweepRow {
  label: string;
  sweep: number;
  seed: number;
  /** Position error bound in meters; Infinity when the geometry is singular. */
  pebM: number;
}

/** One cell of an area-map CSV (`x_m,y_m,indoor,epsilon,peb_m`). */
export interface GridRow {
  xM: number;
  yM: number;
  indoor: boolean;
  epsilon: number;
  pebM: number;
}

export type FigureKind = "lines" | "heatmap";

/** Everything needed to turn one CSV file into one or more SVG figures. */
export interface FigureSpec {
  kind: FigureKind;
  /** Input CSV path. */
  input: string;
  /** Output image path; multi-epsilon heatmaps get an `_eps<value>` suffix each. */
  output: string;
  xLabel?: string;
  yLabel?: string;
  /** Lines only: log-scale y axis (default true). */
  logY?: boolean;
  /** Heatmap only: color scale lower bound in meters (default 0.1). */
  vmin?: number;
  /** Heatmap only: color scale upper bound in meters (default 100). */
  vmax?: number;
  /** Heatmap only: panel marker positions; inferred from the indoor mask when omitted. */
  risMarkers?: Array<[number, number]>;
}

/** Malformed flags, unreadable files, or schema violations; the CLI exits 2. */
export class InputError extends Error {}
