// JSON document shapes served by the mission HTTP API.

export interface WaypointDoc {
  lat: number;
  lon: number;
  alt: number;
  time: number;
  v_air?: number | null;
}

export interface TraceDoc {
  columns: string[];
  rows: number[][];
  end: {
    time: number;
    lat: number;
    lon: number;
    alt: number;
    soc: number;
    v_air: number;
  };
  feasible: boolean;
  status: string;
  cancel_term: string | null;
}

export interface BreakdownDoc {
  terms: Record<string, number>;
  total: number | null;
  max_inputs: Record<string, number>;
  cancelled: boolean;
  cancel_term: string | null;
}

export interface PlanDoc {
  waypoints: WaypointDoc[];
  trace: TraceDoc | null;
  breakdown: BreakdownDoc;
  cancelled: boolean;
  total_cost: number | null;
  duration_s: number;
  distance_m: number;
  min_soc: number;
  node_path: number[][];
  n_edge_evaluations: number;
  grid_settings: Record<string, unknown>;
  meta: Record<string, unknown>;
}

export interface PlanRef {
  index: number;
  kind: string;
  weather_ref: string;
  file: string;
  cancelled: boolean;
  total_cost: number | null;
  duration_s: number;
  min_soc: number;
  departure_time: number;
}

export interface MissionRecordDoc {
  id: string;
  definition: Record<string, any>;
  status: string;
  weather_vintages: { ref: string; retrieved_at: number }[];
  plans: PlanRef[];
}

export interface MissionSummary {
  id: string;
  status: string;
  mission_type: string;
  name: string;
  n_plans: number;
}

export interface SweepEntry {
  t_depart: number;
  total_cost: number | null;
  min_soc: number;
  duration_s: number;
  cancelled: boolean;
}

export interface SweepDoc {
  entries: SweepEntry[];
  best_index: number | null;
}

export interface SliceDoc {
  field: string;
  time: number;
  alt: number | null;
  lats: number[];
  lons: number[];
  values: number[][];
  units_note: string;
}

export interface JobDoc {
  status: "queued" | "running" | "done" | "error";
  result?: any;
  error?: string;
}
