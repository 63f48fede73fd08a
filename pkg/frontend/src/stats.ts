/** Aggregation helpers shared by both figure kinds. */
import { InputError } from "./types.js";

/**
 * Median with the simulator's convention: even-length inputs average the
 * two middle values. Infinities sort high, so a majority of singular
 * bounds yields an infinite median while a minority leaves it finite.
 */
export function median(values: readonly number[]): number {
  if (values.length === 0) {
    throw new InputError("median of an empty set");
  }
  const sorted = [...values].sort((a, b) => (a < b ? -1 : a > b ? 1 : 0));
  const mid = sorted.length >> 1;
  return sorted.length % 2 === 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}
