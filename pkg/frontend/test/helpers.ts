import { fileURLToPath } from "node:url";

/** Absolute path of a committed fixture file. */
export function fixture(name: string): string {
  return fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
}

/** Number of non-overlapping matches of a pattern in an SVG string. */
export function count(svg: string, pattern: RegExp): number {
  return [...svg.matchAll(pattern)].length;
}

/** Build a sweep CSV with deterministic positive bounds. */
export function makeSweepCsv(labels: string[], sweeps: number[], seeds: number[]): string {
  const lines = ["label,sweep,seed,peb_m"];
  labels.forEach((label, li) => {
    for (const sweep of sweeps) {
      for (const seed of seeds) {
        const peb = (10 * (li + 1)) / sweep + 0.1 * seed;
        lines.push(`${label},${sweep},${seed},${peb}`);
      }
    }
  });
  return lines.join("\n") + "\n";
}

/** Build a single-epsilon grid CSV over an n-by-n cell lattice. */
export function makeGridCsv(
  n: number,
  epsilon: string,
  peb: (x: number, y: number) => number | "inf" = (x, y) => 0.5 + (Math.abs(x) + Math.abs(y)) / 10,
  indoor: (x: number, y: number) => boolean = () => false,
): string {
  const lines = ["x_m,y_m,indoor,epsilon,peb_m"];
  for (let iy = 0; iy < n; iy++) {
    for (let ix = 0; ix < n; ix++) {
      const x = -n + 1 + 2 * ix;
      const y = -n + 1 + 2 * iy;
      lines.push(`${x},${y},${indoor(x, y) ? 1 : 0},${epsilon},${peb(x, y)}`);
    }
  }
  return lines.join("\n") + "\n";
}
