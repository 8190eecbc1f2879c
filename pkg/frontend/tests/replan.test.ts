// Criterion: the replan diff renders old and new routes from two stored
// plan documents without any client-side recomputation.
import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { diffPlans, routeOf, validStateInput } from "../src/replan.js";
import type { PlanDoc } from "../src/types.js";

const oldPlan: PlanDoc = JSON.parse(
  readFileSync(new URL("./fixtures/plan_old.json", import.meta.url), "utf-8")
);
const newPlan: PlanDoc = JSON.parse(
  readFileSync(new URL("./fixtures/plan_new.json", import.meta.url), "utf-8")
);

describe("replan diff view", () => {
  it("takes both routes verbatim from the stored documents", () => {
    const diff = diffPlans(oldPlan, newPlan);
    expect(JSON.stringify(diff.oldPath)).toBe(
      JSON.stringify(oldPlan.waypoints.map((w) => [w.lat, w.lon]))
    );
    expect(JSON.stringify(diff.newPath)).toBe(
      JSON.stringify(newPlan.waypoints.map((w) => [w.lat, w.lon]))
    );
  });

  it("cost deltas are simple differences of served breakdowns", () => {
    const diff = diffPlans(oldPlan, newPlan);
    for (const [term, delta] of Object.entries(diff.termDeltas)) {
      const expected =
        (newPlan.breakdown.terms[term] ?? 0) - (oldPlan.breakdown.terms[term] ?? 0);
      expect(delta).toBe(expected);
    }
    expect(diff.durationDelta).toBe(newPlan.duration_s - oldPlan.duration_s);
    expect(diff.minSocDelta).toBe(newPlan.min_soc - oldPlan.min_soc);
  });

  it("the replanned route continues from the reported state to the arrival", () => {
    const oldArr = oldPlan.waypoints[oldPlan.waypoints.length - 1];
    const newArr = newPlan.waypoints[newPlan.waypoints.length - 1];
    expect(newArr.lat).toBeCloseTo(oldArr.lat, 9);
    expect(newArr.lon).toBeCloseTo(oldArr.lon, 9);
    expect(routeOf(newPlan).length).toBeGreaterThan(1);
  });

  it("rejects implausible operator state input client-side", () => {
    expect(validStateInput(47.0, 8.5, 0.7)).toBeNull();
    expect(validStateInput(95.0, 8.5, 0.7)).toMatch(/latitude/);
    expect(validStateInput(47.0, 8.5, 1.4)).toMatch(/state of charge/);
    expect(validStateInput(47.0, Number.NaN, 0.7)).toMatch(/longitude/);
  });
});
