// Central view state: what the operator is looking at.

import type { MissionRecordDoc, PlanDoc } from "./types.js";

export interface OverlayState {
  field: string;
  time: number;
  alt: number | null;
}

export interface ViewState {
  missionId: string | null;
  planIndex: number | null;
  overlay: OverlayState;
  cursor: number | null; // time along the selected plan
}

export function initialState(): ViewState {
  return {
    missionId: null,
    planIndex: null,
    overlay: { field: "wind_east", time: 0, alt: null },
    cursor: null,
  };
}

export interface TimeRange {
  lo: number;
  hi: number;
}

export function clamp(value: number, range: TimeRange): number {
  return Math.min(range.hi, Math.max(range.lo, value));
}

// Scrub steps outside the weather vintage's domain are disabled, not clamped
// silently: the caller greys the control out when this returns false.
export function scrubAllowed(value: number, range: TimeRange): boolean {
  return value >= range.lo && value <= range.hi;
}

export function planTimeRange(plan: PlanDoc): TimeRange | null {
  if (!plan.waypoints.length) {
    return null;
  }
  return {
    lo: plan.waypoints[0].time,
    hi: plan.waypoints[0].time + plan.duration_s,
  };
}

export function setCursor(state: ViewState, plan: PlanDoc, t: number): ViewState {
  const range = planTimeRange(plan);
  return { ...state, cursor: range === null ? null : clamp(t, range) };
}

export function selectPlan(
  state: ViewState,
  record: MissionRecordDoc,
  index: number
): ViewState {
  if (index < 0 || index >= record.plans.length) {
    throw new Error(`mission ${record.id} has no plan ${index}`);
  }
  return { ...state, missionId: record.id, planIndex: index, cursor: null };
}
