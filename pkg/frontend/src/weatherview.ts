// Weather slice rendering helpers: value raster plus wind-vector glyphs.
// Rasters come from the server's slice endpoint; the client only maps
// values to colors.

import type { SliceDoc } from "./types.js";

export function valueRange(slice: SliceDoc): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of slice.values) {
    for (const v of row) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!Number.isFinite(lo)) {
    return [0, 1];
  }
  return lo === hi ? [lo, lo + 1] : [lo, hi];
}

// perceptually-ordered blue->white->red map for signed fields,
// white->blue for magnitudes
export function colorFor(v: number, lo: number, hi: number, signed: boolean): [number, number, number] {
  const t = Math.min(1, Math.max(0, (v - lo) / (hi - lo)));
  if (signed) {
    const s = 2 * t - 1;
    if (s < 0) {
      return [Math.round(255 * (1 + s)), Math.round(255 * (1 + s)), 255];
    }
    return [255, Math.round(255 * (1 - s)), Math.round(255 * (1 - s))];
  }
  return [Math.round(255 * (1 - t)), Math.round(255 * (1 - 0.6 * t)), 255];
}

const SIGNED_FIELDS = new Set(["wind_east", "wind_north", "temperature"]);

export function rasterize(slice: SliceDoc): {
  width: number;
  height: number;
  rgba: Uint8ClampedArray;
} {
  const height = slice.lats.length;
  const width = slice.lons.length;
  const [lo, hi] = valueRange(slice);
  const signed = SIGNED_FIELDS.has(slice.field);
  const rgba = new Uint8ClampedArray(width * height * 4);
  for (let iy = 0; iy < height; iy++) {
    // row 0 of the image is the northernmost latitude
    const src = slice.values[height - 1 - iy];
    for (let ix = 0; ix < width; ix++) {
      const [r, g, b] = colorFor(src[ix], lo, hi, signed);
      const o = (iy * width + ix) * 4;
      rgba[o] = r;
      rgba[o + 1] = g;
      rgba[o + 2] = b;
      rgba[o + 3] = 235;
    }
  }
  return { width, height, rgba };
}

export interface WindVector {
  lat: number;
  lon: number;
  u: number;
  v: number;
}

export function windVectors(
  east: SliceDoc,
  north: SliceDoc,
  stride = 2
): WindVector[] {
  const out: WindVector[] = [];
  for (let iy = 0; iy < east.lats.length; iy += stride) {
    for (let ix = 0; ix < east.lons.length; ix += stride) {
      out.push({
        lat: east.lats[iy],
        lon: east.lons[ix],
        u: east.values[iy][ix],
        v: north.values[iy][ix],
      });
    }
  }
  return out;
}
