/**
 * Read-only access to a solver run directory.
 *
 * A run directory is the file-based interface of the solver package:
 *   manifest.json          config echo, derived values, SHA-256 of every file
 *   series.csv             per-snapshot diagnostics
 *   snapshots/t_*.csv      x, re_psi, im_psi, density
 *   difference/t_*.csv     x, density_diff          (single-soliton runs)
 *   errorscan.csv          epsilon, l2_error        (error-scan runs)
 */

import { createHash } from "node:crypto";
import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

export interface Manifest {
  config: Record<string, unknown>;
  derived: Record<string, number | string>;
  version: string;
  status: string;
  files: Record<string, string>;
}

export interface Snapshot {
  t: number;
  x: number[];
  density: number[];
}

export interface ErrorScanRow {
  epsilon: number;
  l2Error: number;
}

export function loadManifest(runDir: string): Manifest {
  return JSON.parse(readFileSync(join(runDir, "manifest.json"), "utf8"));
}

/** Parse a small numeric CSV with a header row. */
function parseCsv(text: string): { header: string[]; rows: number[][] } {
  const lines = text.trim().split("\n");
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(",").map(Number));
  return { header, rows };
}

function snapshotTime(name: string): number {
  // file names look like t_000012.000.csv
  const m = name.match(/^t_([0-9.]+)\.csv$/);
  if (!m) throw new Error(`not a snapshot file name: ${name}`);
  return Number(m[1]);
}

function loadStack(dir: string, valueColumn: string): Snapshot[] {
  const names = readdirSync(dir)
    .filter((n) => n.endsWith(".csv"))
    .sort();
  return names.map((name) => {
    const { header, rows } = parseCsv(readFileSync(join(dir, name), "utf8"));
    const xCol = header.indexOf("x");
    const vCol = header.indexOf(valueColumn);
    if (xCol < 0 || vCol < 0) {
      throw new Error(`${name}: expected columns x and ${valueColumn}`);
    }
    return {
      t: snapshotTime(name),
      x: rows.map((r) => r[xCol]),
      density: rows.map((r) => r[vCol]),
    };
  });
}

export function loadDensityStack(runDir: string): Snapshot[] {
  return loadStack(join(runDir, "snapshots"), "density");
}

export function loadDifferenceStack(runDir: string): Snapshot[] {
  return loadStack(join(runDir, "difference"), "density_diff");
}

export function loadErrorScan(runDir: string): ErrorScanRow[] {
  const { header, rows } = parseCsv(
    readFileSync(join(runDir, "errorscan.csv"), "utf8"),
  );
  if (header[0] !== "epsilon" || header[1] !== "l2_error") {
    throw new Error(`unexpected errorscan.csv header: ${header.join(",")}`);
  }
  return rows.map(([epsilon, l2Error]) => ({ epsilon, l2Error }));
}

/**
 * Recompute the SHA-256 of every file listed in the manifest and compare.
 * Returns the relative paths that do not match (empty array = intact).
 */
export function verifyChecksums(runDir: string): string[] {
  const manifest = loadManifest(runDir);
  const bad: string[] = [];
  for (const [rel, expected] of Object.entries(manifest.files)) {
    const digest = createHash("sha256")
      .update(readFileSync(join(runDir, rel)))
      .digest("hex");
    if (digest !== expected) bad.push(rel);
  }
  return bad;
}
