// Old-vs-new route diff for the replan console: pure reads of two stored
// plan documents, no client-side recomputation of any physics.

import type { PlanDoc } from "./types.js";

export interface RouteDiff {
  oldPath: [number, number][];
  newPath: [number, number][];
  termDeltas: Record<string, number>;
  totalDelta: number | null;
  durationDelta: number;
  minSocDelta: number;
  newCancelled: boolean;
}

export function routeOf(plan: PlanDoc): [number, number][] {
  return plan.waypoints.map((w) => [w.lat, w.lon]);
}

export function diffPlans(oldPlan: PlanDoc, newPlan: PlanDoc): RouteDiff {
  const terms = new Set([
    ...Object.keys(oldPlan.breakdown.terms),
    ...Object.keys(newPlan.breakdown.terms),
  ]);
  const termDeltas: Record<string, number> = {};
  for (const k of terms) {
    termDeltas[k] =
      (newPlan.breakdown.terms[k] ?? 0) - (oldPlan.breakdown.terms[k] ?? 0);
  }
  const totalDelta =
    newPlan.total_cost === null || oldPlan.total_cost === null
      ? null
      : newPlan.total_cost - oldPlan.total_cost;
  return {
    oldPath: routeOf(oldPlan),
    newPath: routeOf(newPlan),
    termDeltas,
    totalDelta,
    durationDelta: newPlan.duration_s - oldPlan.duration_s,
    minSocDelta: newPlan.min_soc - oldPlan.min_soc,
    newCancelled: newPlan.cancelled,
  };
}

export function validStateInput(lat: number, lon: number, soc: number): string | null {
  if (!Number.isFinite(lat) || lat < -90 || lat > 90) {
    return "latitude must be within [-90, 90]";
  }
  if (!Number.isFinite(lon) || lon < -180 || lon >= 360) {
    return "longitude must be within [-180, 360)";
  }
  if (!Number.isFinite(soc) || soc < 0 || soc > 1) {
    return "state of charge must be within [0, 1]";
  }
  return null;
}
