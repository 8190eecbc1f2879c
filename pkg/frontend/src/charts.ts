// Minimal SVG chart primitives (pure string/path generation).

export interface Extent {
  lo: number;
  hi: number;
}

export function extentOf(values: (number | null)[]): Extent {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v === null || !Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) {
    return { lo: 0, hi: 1 };
  }
  if (lo === hi) {
    return { lo: lo - 0.5, hi: hi + 0.5 };
  }
  return { lo, hi };
}

export function scale(extent: Extent, sizePx: number, invert = false) {
  const span = extent.hi - extent.lo;
  return (v: number) => {
    const t = (v - extent.lo) / span;
    return invert ? sizePx * (1 - t) : sizePx * t;
  };
}

export function linePath(
  xs: number[],
  ys: (number | null)[],
  width: number,
  height: number,
  xExtent?: Extent,
  yExtent?: Extent
): string {
  const ex = xExtent ?? extentOf(xs);
  const ey = yExtent ?? extentOf(ys);
  const sx = scale(ex, width);
  const sy = scale(ey, height, true);
  let d = "";
  let pen = false;
  xs.forEach((x, i) => {
    const y = ys[i];
    if (y === null || !Number.isFinite(y)) {
      pen = false;
      return;
    }
    d += `${pen ? "L" : "M"}${sx(x).toFixed(1)},${sy(y).toFixed(1)}`;
    pen = true;
  });
  return d;
}

export function projectLatLon(
  lats: number[],
  lons: number[],
  width: number,
  height: number
) {
  const ey = extentOf(lats);
  const ex = extentOf(lons);
  const sx = scale(ex, width);
  const sy = scale(ey, height, true);
  return (lat: number, lon: number): [number, number] => [sx(lon), sy(lat)];
}
