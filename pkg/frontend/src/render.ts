/** The three figure kinds regenerated from a run directory. */

import {
  loadDensityStack,
  loadDifferenceStack,
  loadErrorScan,
  type Snapshot,
} from "./io.js";
import { colormap } from "./colormap.js";
import { SvgDoc, scaleLinear, ticks } from "./svg.js";

export interface RenderOptions {
  width?: number;
  height?: number;
  cmap?: string;
  vmin?: number;
  vmax?: number;
  /** Clip the x axis, e.g. [-300, 300]. Defaults to the full grid. */
  xlim?: [number, number];
}

const MARGIN = { left: 64, right: 88, top: 36, bottom: 48 };
const MAX_COLUMNS = 400;

interface Frame {
  doc: SvgDoc;
  px: (v: number) => number;
  py: (v: number) => number;
  plotW: number;
  plotH: number;
}

function makeFrame(
  width: number,
  height: number,
  xDomain: [number, number],
  yDomain: [number, number],
  labels: { title: string; x: string; y: string },
): Frame {
  const doc = new SvgDoc(width, height);
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const px = scaleLinear(xDomain, [MARGIN.left, MARGIN.left + plotW]);
  const py = scaleLinear(yDomain, [MARGIN.top + plotH, MARGIN.top]);
  doc.text(width / 2, MARGIN.top - 14, labels.title, { size: 14, anchor: "middle" });
  doc.text(width / 2, height - 10, labels.x, { anchor: "middle" });
  doc.text(16, MARGIN.top + plotH / 2, labels.y, {
    anchor: "middle",
    rotate: -90,
  });
  for (const t of ticks(xDomain[0], xDomain[1])) {
    doc.line(px(t), MARGIN.top + plotH, px(t), MARGIN.top + plotH + 4);
    doc.text(px(t), MARGIN.top + plotH + 18, String(t), { size: 10, anchor: "middle" });
  }
  for (const t of ticks(yDomain[0], yDomain[1])) {
    doc.line(MARGIN.left - 4, py(t), MARGIN.left, py(t));
    doc.text(MARGIN.left - 8, py(t) + 3, String(t), { size: 10, anchor: "end" });
  }
  doc.line(MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW, MARGIN.top + plotH);
  doc.line(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH);
  return { doc, px, py, plotW, plotH };
}

function colorbar(
  frame: Frame,
  width: number,
  cmap: string,
  vmin: number,
  vmax: number,
): void {
  const x0 = width - MARGIN.right + 20;
  const steps = 64;
  const h = frame.plotH / steps;
  for (let i = 0; i < steps; i++) {
    const u = 1 - i / (steps - 1);
    frame.doc.rect(x0, MARGIN.top + i * h, 14, h + 0.5, colormap(cmap, u));
  }
  frame.doc.text(x0 + 18, MARGIN.top + 8, vmax.toPrecision(3), { size: 10 });
  frame.doc.text(x0 + 18, MARGIN.top + frame.plotH, vmin.toPrecision(3), { size: 10 });
}

/** Average consecutive samples so a row never exceeds MAX_COLUMNS cells. */
function thin(values: number[], factor: number): number[] {
  if (factor <= 1) return values;
  const out: number[] = [];
  for (let i = 0; i < values.length; i += factor) {
    let sum = 0;
    let n = 0;
    for (let j = i; j < Math.min(i + factor, values.length); j++) {
      sum += values[j];
      n++;
    }
    out.push(sum / n);
  }
  return out;
}

function heatmap(
  stack: Snapshot[],
  opts: RenderOptions,
  labels: { title: string; y: string },
  defaultCmap: string,
): string {
  if (stack.length === 0) throw new Error("no snapshots to render");
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const cmap = opts.cmap ?? defaultCmap;
  const xlim = opts.xlim ?? [stack[0].x[0], stack[0].x[stack[0].x.length - 1]];

  const inWindow = stack[0].x
    .map((x, i) => [x, i] as const)
    .filter(([x]) => x >= xlim[0] && x <= xlim[1])
    .map(([, i]) => i);
  const factor = Math.ceil(inWindow.length / MAX_COLUMNS);

  const rows = stack.map((s) => thin(inWindow.map((i) => s.density[i]), factor));
  const flat = rows.flat();
  const vmin = opts.vmin ?? Math.min(...flat);
  const vmax = opts.vmax ?? Math.max(...flat);
  const tMin = stack[0].t;
  const tMax = stack[stack.length - 1].t;

  const frame = makeFrame(width, height, xlim, [tMin, tMax], {
    title: labels.title,
    x: "x",
    y: "t",
  });
  const cellW = frame.plotW / rows[0].length;
  const cellH = frame.plotH / rows.length;
  rows.forEach((row, r) => {
    const y = frame.py(stack[r].t) - cellH / 2;
    row.forEach((v, c) => {
      const u = vmax > vmin ? (v - vmin) / (vmax - vmin) : 0.5;
      frame.doc.rect(MARGIN.left + c * cellW, y, cellW + 0.5, cellH + 0.5, colormap(cmap, u));
    });
  });
  colorbar(frame, width, cmap, vmin, vmax);
  return frame.doc.render();
}

export function renderDensityContour(runDir: string, opts: RenderOptions = {}): string {
  return heatmap(loadDensityStack(runDir), opts, { title: "density |psi|^2", y: "t" }, "viridis");
}

export function renderDifferenceContour(runDir: string, opts: RenderOptions = {}): string {
  const stack = loadDifferenceStack(runDir);
  // symmetric limits unless the caller pinned them
  if (opts.vmin === undefined && opts.vmax === undefined) {
    const flat = stack.flatMap((s) => s.density);
    const m = Math.max(...flat.map(Math.abs));
    opts = { ...opts, vmin: -m, vmax: m };
  }
  return heatmap(stack, opts, { title: "density difference (analytic - numeric)", y: "t" }, "coolwarm");
}

export function renderErrorScanLoglog(runDir: string, opts: RenderOptions = {}): string {
  const scan = loadErrorScan(runDir);
  if (scan.length === 0) throw new Error("errorscan.csv has no rows");
  const width = opts.width ?? 560;
  const height = opts.height ?? 440;
  const lx = scan.map((r) => Math.log10(r.epsilon));
  const ly = scan.map((r) => Math.log10(r.l2Error));
  const pad = 0.25;
  const frame = makeFrame(
    width,
    height,
    [Math.min(...lx) - pad, Math.max(...lx) + pad],
    [Math.min(...ly) - pad, Math.max(...ly) + pad],
    { title: "error scan", x: "log10 epsilon", y: "log10 L2 error" },
  );
  const pts = scan.map(
    (r) => [frame.px(Math.log10(r.epsilon)), frame.py(Math.log10(r.l2Error))] as [number, number],
  );
  frame.doc.polyline(pts, "#31688e", 1.5);
  pts.forEach(([x, y]) => frame.doc.circle(x, y, 3.5, "#31688e"));
  if (scan.length >= 3) {
    const slope = fitSlope(lx, ly);
    frame.doc.text(width - MARGIN.right - 4, MARGIN.top + 16, `slope = ${slope.toFixed(2)}`, {
      anchor: "end",
    });
  }
  return frame.doc.render();
}

function fitSlope(xs: number[], ys: number[]): number {
  const n = xs.length;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) ** 2;
  }
  return num / den;
}

export const RENDERERS: Record<string, (runDir: string, opts?: RenderOptions) => string> = {
  density: renderDensityContour,
  difference: renderDifferenceContour,
  errorscan: renderErrorScanLoglog,
};
