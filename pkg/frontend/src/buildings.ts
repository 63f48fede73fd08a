/** Building outlines and panel markers reconstructed from the indoor mask.

The area-map CSV carries no geometry columns, so the footprints are
recovered from where the indoor flag flips between neighboring cells,
and panel positions are inferred for rectangular footprints as the
midpoint of the facade nearest the grid center (panels serve the street
side in the simulated scenarios). Non-rectangular indoor regions get an
outline but no inferred marker.
*/
import { HeatGrid, edgeX, edgeY } from "./grid.js";

/** Line segment x1, y1, x2, y2 in data coordinates. */
export type Segment = [number, number, number, number];

function mergeRuns(indices: number[]): Array<[number, number]> {
  const runs: Array<[number, number]> = [];
  for (const i of indices.sort((a, b) => a - b)) {
    const last = runs[runs.length - 1];
    if (last && i === last[1]) {
      last[1] = i + 1;
    } else {
      runs.push([i, i + 1]);
    }
  }
  return runs;
}

/** Boundary edges between indoor and outdoor cells, merged into maximal segments. */
export function outlineSegments(grid: HeatGrid): Segment[] {
  const nx = grid.xs.length;
  const ny = grid.ys.length;
  const at = (ix: number, iy: number) =>
    ix >= 0 && ix < nx && iy >= 0 && iy < ny ? grid.indoor[iy][ix] : false;

  const segments: Segment[] = [];
  // Vertical boundaries: key ix is the boundary index, runs span rows.
  for (let ix = 0; ix <= nx; ix++) {
    const rows: number[] = [];
    for (let iy = 0; iy < ny; iy++) {
      if (at(ix - 1, iy) !== at(ix, iy)) {
        rows.push(iy);
      }
    }
    const x = edgeX(grid, ix);
    for (const [start, end] of mergeRuns(rows)) {
      segments.push([x, edgeY(grid, start), x, edgeY(grid, end)]);
    }
  }
  // Horizontal boundaries.
  for (let iy = 0; iy <= ny; iy++) {
    const cols: number[] = [];
    for (let ix = 0; ix < nx; ix++) {
      if (at(ix, iy - 1) !== at(ix, iy)) {
        cols.push(ix);
      }
    }
    const y = edgeY(grid, iy);
    for (const [start, end] of mergeRuns(cols)) {
      segments.push([edgeX(grid, start), y, edgeX(grid, end), y]);
    }
  }
  return segments;
}

export interface MarkerInference {
  markers: Array<[number, number]>;
  warnings: string[];
}

/** One marker per rectangular indoor component, at the center-facing facade midpoint. */
export function inferPanelMarkers(grid: HeatGrid): MarkerInference {
  const nx = grid.xs.length;
  const ny = grid.ys.length;
  const seen = grid.ys.map(() => new Array<boolean>(nx).fill(false));
  const markers: Array<[number, number]> = [];
  const warnings: string[] = [];
  const centerX = (edgeX(grid, 0) + edgeX(grid, nx)) / 2;
  const centerY = (edgeY(grid, 0) + edgeY(grid, ny)) / 2;

  for (let iy0 = 0; iy0 < ny; iy0++) {
    for (let ix0 = 0; ix0 < nx; ix0++) {
      if (!grid.indoor[iy0][ix0] || seen[iy0][ix0]) {
        continue;
      }
      // Flood-fill one indoor component (4-connected).
      const queue: Array<[number, number]> = [[ix0, iy0]];
      seen[iy0][ix0] = true;
      let count = 0;
      let ixMin = ix0;
      let ixMax = ix0;
      let iyMin = iy0;
      let iyMax = iy0;
      while (queue.length) {
        const [ix, iy] = queue.pop()!;
        count += 1;
        ixMin = Math.min(ixMin, ix);
        ixMax = Math.max(ixMax, ix);
        iyMin = Math.min(iyMin, iy);
        iyMax = Math.max(iyMax, iy);
        for (const [dx, dy] of [[1, 0], [-1, 0], [0, 1], [0, -1]] as const) {
          const jx = ix + dx;
          const jy = iy + dy;
          if (jx >= 0 && jx < nx && jy >= 0 && jy < ny && grid.indoor[jy][jx] && !seen[jy][jx]) {
            seen[jy][jx] = true;
            queue.push([jx, jy]);
          }
        }
      }
      if (count !== (ixMax - ixMin + 1) * (iyMax - iyMin + 1)) {
        warnings.push("indoor region is not rectangular; no panel marker inferred for it");
        continue;
      }
      const x0 = edgeX(grid, ixMin);
      const x1 = edgeX(grid, ixMax + 1);
      const y0 = edgeY(grid, iyMin);
      const y1 = edgeY(grid, iyMax + 1);
      const cx = (x0 + x1) / 2;
      const cy = (y0 + y1) / 2;
      const candidates: Array<[number, number]> = [
        [x0, cy],
        [x1, cy],
        [cx, y0],
        [cx, y1],
      ];
      let best = candidates[0];
      let bestDist = Infinity;
      for (const [px, py] of candidates) {
        const dist = (px - centerX) ** 2 + (py - centerY) ** 2;
        if (dist < bestDist) {
          bestDist = dist;
          best = [px, py];
        }
      }
      markers.push(best);
    }
  }
  return { markers, warnings };
}
