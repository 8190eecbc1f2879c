// Chart series extracted verbatim from API trace payloads.
//
// The UI must display only server-provided numbers: every extractor here is
// a pure column lookup with no arithmetic on the values.

import type { PlanDoc, TraceDoc } from "./types.js";

export interface Series {
  label: string;
  times: number[];
  values: number[];
}

export function columnIndex(trace: TraceDoc, column: string): number {
  const idx = trace.columns.indexOf(column);
  if (idx < 0) {
    throw new Error(`trace has no column '${column}'`);
  }
  return idx;
}

export function traceSeries(trace: TraceDoc, column: string, label?: string): Series {
  const t = columnIndex(trace, "time");
  const c = columnIndex(trace, column);
  return {
    label: label ?? column,
    times: trace.rows.map((r) => r[t]),
    values: trace.rows.map((r) => r[c]),
  };
}

export const REVIEW_COLUMNS = [
  "soc",
  "p_solar",
  "p_flight",
  "v_air",
  "v_gnd",
] as const;

export function reviewSeries(trace: TraceDoc): Series[] {
  return REVIEW_COLUMNS.map((c) => traceSeries(trace, c));
}

export function costRateSeries(trace: TraceDoc): Series[] {
  return trace.columns
    .filter((c) => c.startsWith("rate_"))
    .map((c) => traceSeries(trace, c, c.slice("rate_".length)));
}

export function activeCostRateSeries(trace: TraceDoc): Series[] {
  return costRateSeries(trace).filter((s) => s.values.some((v) => v !== 0));
}

export interface CancelMarker {
  time: number;
  term: string;
}

export function cancelMarker(plan: PlanDoc): CancelMarker | null {
  const trace = plan.trace;
  if (!trace || !plan.cancelled || !trace.cancel_term || trace.rows.length === 0) {
    return null;
  }
  const t = columnIndex(trace, "time");
  return { time: trace.rows[trace.rows.length - 1][t], term: trace.cancel_term };
}

export function nearestSampleIndex(trace: TraceDoc, time: number): number {
  const t = columnIndex(trace, "time");
  let best = 0;
  let bestDist = Infinity;
  trace.rows.forEach((row, i) => {
    const d = Math.abs(row[t] - time);
    if (d < bestDist) {
      bestDist = d;
      best = i;
    }
  });
  return best;
}
