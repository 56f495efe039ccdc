#!/usr/bin/env node
/**
 * figkit <kind> <run_dir> [-o out.svg] [--vmin V] [--vmax V] [--cmap NAME]
 *
 * kind: density | difference | errorscan
 * Reads only the CSV/JSON files of the run directory; never touches solver state.
 */

import { writeFileSync } from "node:fs";
import { basename, join } from "node:path";
import { parseArgs } from "node:util";
import { colormapNames } from "./colormap.js";
import { RENDERERS, type RenderOptions } from "./render.js";

function usage(): string {
  return (
    "usage: figkit <density|difference|errorscan> <run_dir> " +
    "[-o out.svg] [--vmin V] [--vmax V] [--cmap NAME] [--xlim LO,HI]\n" +
    `colormaps: ${colormapNames().join(", ")}`
  );
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        output: { type: "string", short: "o" },
        vmin: { type: "string" },
        vmax: { type: "string" },
        cmap: { type: "string" },
        xlim: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (err) {
    console.error(String(err));
    console.error(usage());
    return 2;
  }
  if (parsed.values.help) {
    console.log(usage());
    return 0;
  }
  const [kind, runDir] = parsed.positionals;
  const render = kind ? RENDERERS[kind] : undefined;
  if (!render || !runDir) {
    console.error(usage());
    return 2;
  }
  const opts: RenderOptions = {};
  if (parsed.values.vmin !== undefined) opts.vmin = Number(parsed.values.vmin);
  if (parsed.values.vmax !== undefined) opts.vmax = Number(parsed.values.vmax);
  if (parsed.values.cmap !== undefined) opts.cmap = parsed.values.cmap;
  if (parsed.values.xlim !== undefined) {
    const [lo, hi] = parsed.values.xlim.split(",").map(Number);
    if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
      console.error(`bad --xlim: ${parsed.values.xlim}`);
      return 2;
    }
    opts.xlim = [lo, hi];
  }

  let svg: string;
  try {
    svg = render(runDir, opts);
  } catch (err) {
    console.error(`figkit: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
  const out =
    parsed.values.output ?? join(runDir, `${basename(runDir)}_${kind}.svg`);
  writeFileSync(out, svg);
  console.log(out);
  return 0;
}

if (process.argv[1] && basename(process.argv[1]).startsWith("cli")) {
  process.exit(main(process.argv.slice(2)));
}
