export { GRID_HEADER, SWEEP_HEADER, parseGridCsv, parseSweepCsv, readCsvFile } from "./csv.js";
export { median } from "./stats.js";
export { checkColorBounds, decadeTicks, linearScale, logFraction, niceTicks, viridis } from "./scale.js";
export { el, esc, fmtNum, px, svgDocument, textEl } from "./svg.js";
export { curvesFromRows, linesSvg, renderLines } from "./lines.js";
export type { Curve, LinesOptions, RenderedSvg } from "./lines.js";
export { edgeX, edgeY, indexGrid, splitByEpsilon } from "./grid.js";
export type { HeatGrid } from "./grid.js";
export { inferPanelMarkers, outlineSegments } from "./buildings.js";
export type { MarkerInference, Segment } from "./buildings.js";
export { INF_COLOR, heatmapSvg, renderHeatmap } from "./heatmap.js";
export type { HeatmapOptions, HeatmapSvg } from "./heatmap.js";
export { USAGE, buildSpec, main } from "./cli.js";
export { InputError } from "./types.js";
export type { FigureKind, FigureSpec, GridRow, SweepRow } from "./types.js";
