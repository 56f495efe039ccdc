/** Small perceptual colormaps sampled at anchor points, linearly blended. */

type Rgb = [number, number, number];

const VIRIDIS: Rgb[] = [
  [68, 1, 84],
  [72, 40, 120],
  [62, 74, 137],
  [49, 104, 142],
  [38, 130, 142],
  [31, 158, 137],
  [53, 183, 121],
  [109, 205, 89],
  [180, 222, 44],
  [253, 231, 37],
];

const COOLWARM: Rgb[] = [
  [59, 76, 192],
  [124, 159, 249],
  [192, 212, 245],
  [242, 242, 242],
  [245, 214, 193],
  [238, 146, 110],
  [180, 4, 38],
];

const MAPS: Record<string, Rgb[]> = { viridis: VIRIDIS, coolwarm: COOLWARM };

export function colormapNames(): string[] {
  return Object.keys(MAPS);
}

/** Map u in [0, 1] to a CSS rgb() string. */
export function colormap(name: string, u: number): string {
  const anchors = MAPS[name];
  if (!anchors) throw new Error(`unknown colormap ${name}`);
  const clamped = Math.min(1, Math.max(0, u));
  const pos = clamped * (anchors.length - 1);
  const i = Math.min(anchors.length - 2, Math.floor(pos));
  const f = pos - i;
  const channel = (c: number) =>
    Math.round(anchors[i][c] * (1 - f) + anchors[i + 1][c] * f);
  return `rgb(${channel(0)},${channel(1)},${channel(2)})`;
}
