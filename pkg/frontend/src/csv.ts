/** Strict readers for the two CSV schemas written by the simulator. */
import { readFileSync } from "fs";
import Papa from "papaparse";
import { GridRow, InputError, SweepRow } from "./types.js";

export const SWEEP_HEADER = "label,sweep,seed,peb_m";
export const GRID_HEADER = "x_m,y_m,indoor,epsilon,peb_m";

export function readCsvFile(path: string): string {
  try {
    return readFileSync(path, "utf8");
  } catch (err) {
    throw new InputError(`cannot read ${path}: ${(err as Error).message}`);
  }
}

function tokenize(text: string, expectedHeader: string): string[][] {
  const parsed = Papa.parse<string[]>(text, { delimiter: ",", skipEmptyLines: true });
  for (const err of parsed.errors) {
    throw new InputError(`CSV parse error: ${err.message}`);
  }
  if (parsed.data.length === 0) {
    throw new InputError("empty CSV: missing header row");
  }
  const header = parsed.data[0].join(",");
  if (header !== expectedHeader) {
    throw new InputError(`bad CSV header: expected "${expectedHeader}", got "${header}"`);
  }
  return parsed.data.slice(1);
}

/** Parse a numeric field; the simulator serializes +infinity as "inf". */
function numberField(field: string, line: number, column: string): number {
  if (field === "inf") {
    return Infinity;
  }
  const value = field.trim() === "" ? NaN : Number(field);
  if (Number.isNaN(value)) {
    throw new InputError(`line ${line}: ${column} is not a number: "${field}"`);
  }
  return value;
}

function finiteField(field: string, line: number, column: string): number {
  const value = numberField(field, line, column);
  if (!Number.isFinite(value)) {
    throw new InputError(`line ${line}: ${column} must be finite, got "${field}"`);
  }
  return value;
}

function boundField(field: string, line: number): number {
  const value = numberField(field, line, "peb_m");
  if (!(value > 0)) {
    throw new InputError(`line ${line}: peb_m must be positive, got "${field}"`);
  }
  return value;
}

/** Read sweep rows (`label,sweep,seed,peb_m`) in file order. */
export function parseSweepCsv(text: string): SweepRow[] {
  const rows = tokenize(text, SWEEP_HEADER);
  return rows.map((fields, i) => {
    const line = i + 2;
    if (fields.length !== 4) {
      throw new InputError(`line ${line}: expected 4 fields, got ${fields.length}`);
    }
    const [label, sweep, seed, peb] = fields;
    if (label === "") {
      throw new InputError(`line ${line}: empty label`);
    }
    return {
      label,
      sweep: finiteField(sweep, line, "sweep"),
      seed: finiteField(seed, line, "seed"),
      pebM: boundField(peb, line),
    };
  });
}

/** Read area-map rows (`x_m,y_m,indoor,epsilon,peb_m`) in file order. */
export function parseGridCsv(text: string): GridRow[] {
  const rows = tokenize(text, GRID_HEADER);
  return rows.map((fields, i) => {
    const line = i + 2;
    if (fields.length !== 5) {
      throw new InputError(`line ${line}: expected 5 fields, got ${fields.length}`);
    }
    const [x, y, indoor, epsilon, peb] = fields;
    if (indoor !== "0" && indoor !== "1") {
      throw new InputError(`line ${line}: indoor must be 0 or 1, got "${indoor}"`);
    }
    const eps = finiteField(epsilon, line, "epsilon");
    if (eps < 0 || eps > 1) {
      throw new InputError(`line ${line}: epsilon must lie in [0, 1], got "${epsilon}"`);
    }
    return {
      xM: finiteField(x, line, "x_m"),
      yM: finiteField(y, line, "y_m"),
      indoor: indoor === "1",
      epsilon: eps,
      pebM: boundField(peb, line),
    };
  });
}
