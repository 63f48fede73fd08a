/** Axis scales, tick placement, and the color map. */
import { InputError } from "./types.js";

export function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): (value: number) => number {
  const k = (r1 - r0) / (d1 - d0);
  return (value) => r0 + (value - d0) * k;
}

/** Decade tick values (powers of ten) covering [min, max]; both must be > 0. */
export function decadeTicks(min: number, max: number): number[] {
  const k0 = Math.ceil(Math.log10(min) - 1e-9);
  const k1 = Math.floor(Math.log10(max) + 1e-9);
  const out: number[] = [];
  for (let k = k0; k <= k1; k++) {
    out.push(10 ** k);
  }
  return out;
}

/** Round-valued ticks (1/2/5 steps) spanning [min, max]. */
export function niceTicks(min: number, max: number, target = 6): number[] {
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const raw = (max - min) / Math.max(1, target);
  const mag = 10 ** Math.floor(Math.log10(raw));
  const norm = raw / mag;
  const step = (norm < 1.5 ? 1 : norm < 3 ? 2 : norm < 7 ? 5 : 10) * mag;
  const out: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

/** Viridis anchors sampled at t = 0, 1/8, ..., 1. */
const VIRIDIS: ReadonlyArray<readonly [number, number, number]> = [
  [0x44, 0x01, 0x54],
  [0x48, 0x28, 0x78],
  [0x3e, 0x4a, 0x89],
  [0x31, 0x68, 0x8e],
  [0x26, 0x82, 0x8e],
  [0x1f, 0x9e, 0x89],
  [0x35, 0xb7, 0x79],
  [0x6e, 0xce, 0x58],
  [0xfd, 0xe7, 0x25],
];

/** Viridis color for t in [0, 1] (clamped), as "#rrggbb". */
export function viridis(t: number): string {
  const u = Math.min(1, Math.max(0, t)) * (VIRIDIS.length - 1);
  const i = Math.min(VIRIDIS.length - 2, Math.floor(u));
  const w = u - i;
  const channel = (c: 0 | 1 | 2) =>
    Math.round(VIRIDIS[i][c] + (VIRIDIS[i + 1][c] - VIRIDIS[i][c]) * w);
  return (
    "#" +
    [channel(0), channel(1), channel(2)]
      .map((c) => c.toString(16).padStart(2, "0"))
      .join("")
  );
}

/** Log-scale position of value within [vmin, vmax], clamped to [0, 1]. */
export function logFraction(value: number, vmin: number, vmax: number): number {
  const t = (Math.log10(value) - Math.log10(vmin)) / (Math.log10(vmax) - Math.log10(vmin));
  return Math.min(1, Math.max(0, t));
}

/** Color bounds must be positive, finite, and ordered. */
export function checkColorBounds(vmin: number, vmax: number): void {
  if (!Number.isFinite(vmin) || !Number.isFinite(vmax) || !(vmin > 0)) {
    throw new InputError(`color bounds must be positive and finite, got ${vmin} and ${vmax}`);
  }
  if (!(vmin < vmax)) {
    throw new InputError(`color bounds must satisfy vmin < vmax, got ${vmin} and ${vmax}`);
  }
}
