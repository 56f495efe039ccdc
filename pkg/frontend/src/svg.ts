/** Minimal SVG scene builder: enough for heatmaps, line plots, and axes. */

const XMLNS = "http://www.w3.org/2000/svg";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmtNum(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toPrecision(6).replace(/\.?0+$/, "");
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmtNum(x)}" y="${fmtNum(y)}" width="${fmtNum(w)}" ` +
        `height="${fmtNum(h)}" fill="${fill}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#000", width = 1): void {
    this.parts.push(
      `<line x1="${fmtNum(x1)}" y1="${fmtNum(y1)}" x2="${fmtNum(x2)}" ` +
        `y2="${fmtNum(y2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke = "#000", width = 1.5): void {
    const pts = points.map(([x, y]) => `${fmtNum(x)},${fmtNum(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill = "#000"): void {
    this.parts.push(`<circle cx="${fmtNum(cx)}" cy="${fmtNum(cy)}" r="${r}" fill="${fill}"/>`);
  }

  text(
    x: number,
    y: number,
    content: string,
    opts: { size?: number; anchor?: string; rotate?: number } = {},
  ): void {
    const size = opts.size ?? 12;
    const anchor = opts.anchor ?? "start";
    const transform = opts.rotate
      ? ` transform="rotate(${opts.rotate} ${fmtNum(x)} ${fmtNum(y)})"`
      : "";
    this.parts.push(
      `<text x="${fmtNum(x)}" y="${fmtNum(y)}" font-size="${size}" ` +
        `font-family="sans-serif" text-anchor="${anchor}"${transform}>${esc(content)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="${XMLNS}" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="#fff"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

/** Linear map from a data interval onto a pixel interval. */
export function scaleLinear(
  [d0, d1]: [number, number],
  [p0, p1]: [number, number],
): (v: number) => number {
  const k = (p1 - p0) / (d1 - d0);
  return (v: number) => p0 + (v - d0) * k;
}

/** Round tick positions covering [lo, hi] with roughly n intervals. */
export function ticks(lo: number, hi: number, n = 5): number[] {
  const span = hi - lo;
  const raw = span / n;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= n + 1) ?? mag * 10;
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) out.push(Number(v.toPrecision(12)));
  return out;
}
