/** Command line entry: render simulator CSVs into SVG figures. */
import { parseArgs } from "node:util";
import { renderHeatmap } from "./heatmap.js";
import { renderLines } from "./lines.js";
import { checkColorBounds } from "./scale.js";
import { FigureSpec, InputError } from "./types.js";

export const USAGE =
  "usage: render --kind {lines|heatmap} --in <csv> --out <img> " +
  "[--vmin M] [--vmax M] [--ris X,Y]... [--x-label S] [--y-label S] [--linear-y]";

function parseNumberFlag(value: string, flag: string): number {
  const parsed = value.trim() === "" ? NaN : Number(value);
  if (!Number.isFinite(parsed)) {
    throw new InputError(`${flag} expects a number, got "${value}"`);
  }
  return parsed;
}

/** Turn argv into a figure spec; throws InputError on any bad flag. */
export function buildSpec(argv: string[]): FigureSpec {
  const { values, positionals } = parseArgs({
    args: argv,
    strict: true,
    allowPositionals: true,
    options: {
      kind: { type: "string" },
      in: { type: "string" },
      out: { type: "string" },
      vmin: { type: "string" },
      vmax: { type: "string" },
      ris: { type: "string", multiple: true },
      "x-label": { type: "string" },
      "y-label": { type: "string" },
      "linear-y": { type: "boolean" },
    },
  });
  const extra = positionals.filter((p, i) => !(i === 0 && p === "render"));
  if (extra.length > 0) {
    throw new InputError(`unexpected argument: ${extra[0]}`);
  }
  if (values.kind !== "lines" && values.kind !== "heatmap") {
    throw new InputError(`--kind must be "lines" or "heatmap", got ${JSON.stringify(values.kind ?? null)}`);
  }
  if (!values.in) {
    throw new InputError("--in is required");
  }
  if (!values.out) {
    throw new InputError("--out is required");
  }
  const spec: FigureSpec = {
    kind: values.kind,
    input: values.in,
    output: values.out,
    xLabel: values["x-label"],
    yLabel: values["y-label"],
    logY: values["linear-y"] ? false : undefined,
  };
  if (values.vmin !== undefined) {
    spec.vmin = parseNumberFlag(values.vmin, "--vmin");
  }
  if (values.vmax !== undefined) {
    spec.vmax = parseNumberFlag(values.vmax, "--vmax");
  }
  if (spec.vmin !== undefined || spec.vmax !== undefined) {
    checkColorBounds(spec.vmin ?? 0.1, spec.vmax ?? 100);
  }
  if (values.ris) {
    spec.risMarkers = values.ris.map((pair) => {
      const fields = pair.split(",");
      if (fields.length !== 2) {
        throw new InputError(`--ris expects "x,y", got "${pair}"`);
      }
      return [parseNumberFlag(fields[0], "--ris"), parseNumberFlag(fields[1], "--ris")];
    });
  }
  return spec;
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = buildSpec(argv);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    console.error(USAGE);
    return 2;
  }
  try {
    const result = spec.kind === "lines" ? renderLines(spec) : renderHeatmap(spec);
    for (const warning of result.warnings) {
      console.error(`warning: ${warning}`);
    }
    for (const path of result.paths) {
      console.log(`wrote ${path}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof InputError) {
      console.error(err.message);
      return 2;
    }
    console.error(err instanceof Error ? err.stack ?? err.message : String(err));
    return 3;
  }
}
