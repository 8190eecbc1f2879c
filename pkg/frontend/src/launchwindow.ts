// Launch-window sweep presentation: series plus the API-designated optimum.

import type { SweepDoc } from "./types.js";

export interface SweepSeries {
  times: number[];
  costs: (number | null)[];
  minSoc: number[];
  cancelled: boolean[];
}

export function sweepSeries(sweep: SweepDoc): SweepSeries {
  return {
    times: sweep.entries.map((e) => e.t_depart),
    costs: sweep.entries.map((e) => e.total_cost),
    minSoc: sweep.entries.map((e) => e.min_soc),
    cancelled: sweep.entries.map((e) => e.cancelled),
  };
}

// The highlighted departure is the server's argmin, never recomputed here.
export function highlightIndex(sweep: SweepDoc): number | null {
  return sweep.best_index;
}

export function pickDeparture(sweep: SweepDoc, index: number): number {
  if (index < 0 || index >= sweep.entries.length) {
    throw new Error(`sweep index ${index} out of range`);
  }
  return sweep.entries[index].t_depart;
}
