import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { extentOf, linePath, projectLatLon } from "../src/charts.js";
import {
  clamp,
  initialState,
  planTimeRange,
  scrubAllowed,
  selectPlan,
  setCursor,
} from "../src/state.js";
import type { MissionRecordDoc, PlanDoc, SliceDoc } from "../src/types.js";
import { colorFor, rasterize, valueRange, windVectors } from "../src/weatherview.js";

const plan: PlanDoc = JSON.parse(
  readFileSync(new URL("./fixtures/plan_old.json", import.meta.url), "utf-8")
);
const record: MissionRecordDoc = JSON.parse(
  readFileSync(new URL("./fixtures/record.json", import.meta.url), "utf-8")
);
const east: SliceDoc = JSON.parse(
  readFileSync(new URL("./fixtures/slice_east.json", import.meta.url), "utf-8")
);
const north: SliceDoc = JSON.parse(
  readFileSync(new URL("./fixtures/slice_north.json", import.meta.url), "utf-8")
);

describe("view state", () => {
  it("keeps the cursor inside the plan's time span", () => {
    const range = planTimeRange(plan)!;
    let st = initialState();
    st = setCursor(st, plan, range.lo - 5000);
    expect(st.cursor).toBe(range.lo);
    st = setCursor(st, plan, range.hi + 5000);
    expect(st.cursor).toBe(range.hi);
    st = setCursor(st, plan, (range.lo + range.hi) / 2);
    expect(st.cursor).toBeGreaterThan(range.lo);
    expect(st.cursor).toBeLessThan(range.hi);
  });

  it("disables out-of-range weather scrubs instead of clamping silently", () => {
    const range = { lo: 100, hi: 200 };
    expect(scrubAllowed(150, range)).toBe(true);
    expect(scrubAllowed(99, range)).toBe(false);
    expect(scrubAllowed(201, range)).toBe(false);
    expect(clamp(250, range)).toBe(200);
  });

  it("selects plans only within the record's history", () => {
    const st = selectPlan(initialState(), record, 0);
    expect(st.missionId).toBe(record.id);
    expect(st.planIndex).toBe(0);
    expect(() => selectPlan(st, record, 99)).toThrow(/no plan/);
  });
});

describe("weather rendering", () => {
  it("rasterizes the slice with one pixel per served node", () => {
    const img = rasterize(east);
    expect(img.width).toBe(east.lons.length);
    expect(img.height).toBe(east.lats.length);
    expect(img.rgba.length).toBe(img.width * img.height * 4);
  });

  it("color mapping stays within the value range", () => {
    const [lo, hi] = valueRange(east);
    expect(lo).toBeLessThan(hi);
    const [r, g, b] = colorFor(lo, lo, hi, true);
    for (const c of [r, g, b]) {
      expect(c).toBeGreaterThanOrEqual(0);
      expect(c).toBeLessThanOrEqual(255);
    }
  });

  it("pairs wind components verbatim into vector glyphs", () => {
    const vecs = windVectors(east, north, 2);
    expect(vecs.length).toBeGreaterThan(0);
    const v0 = vecs[0];
    const iy = east.lats.indexOf(v0.lat);
    const ix = east.lons.indexOf(v0.lon);
    expect(v0.u).toBe(east.values[iy][ix]);
    expect(v0.v).toBe(north.values[iy][ix]);
  });
});

describe("chart primitives", () => {
  it("line paths visit every finite point in order", () => {
    const d = linePath([0, 1, 2], [1, null, 3], 100, 50);
    expect(d.startsWith("M")).toBe(true);
    // the null breaks the pen: two move commands
    expect(d.match(/M/g)!.length).toBe(2);
  });

  it("projects the plan route into the viewport", () => {
    const lats = plan.waypoints.map((w) => w.lat);
    const lons = plan.waypoints.map((w) => w.lon);
    const project = projectLatLon(lats, lons, 400, 300);
    for (const w of plan.waypoints) {
      const [x, y] = project(w.lat, w.lon);
      expect(x).toBeGreaterThanOrEqual(-1e-9);
      expect(x).toBeLessThanOrEqual(400 + 1e-9);
      expect(y).toBeGreaterThanOrEqual(-1e-9);
      expect(y).toBeLessThanOrEqual(300 + 1e-9);
    }
  });

  it("extent handles degenerate series", () => {
    expect(extentOf([5, 5, 5])).toEqual({ lo: 4.5, hi: 5.5 });
    expect(extentOf([])).toEqual({ lo: 0, hi: 1 });
  });
});
