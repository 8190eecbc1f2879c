// App bootstrap: mission picker plus the four operator panels
// (weather browser, plan review, launch-window explorer, replan console).

import { MissionApi } from "./api.js";
import { extentOf, linePath, projectLatLon } from "./charts.js";
import { highlightIndex, pickDeparture, sweepSeries } from "./launchwindow.js";
import { diffPlans, routeOf, validStateInput } from "./replan.js";
import {
  activeCostRateSeries,
  cancelMarker,
  nearestSampleIndex,
  reviewSeries,
  traceSeries,
} from "./series.js";
import { initialState, planTimeRange, setCursor, ViewState } from "./state.js";
import type { MissionRecordDoc, PlanDoc, SweepDoc } from "./types.js";
import { rasterize, valueRange, windVectors } from "./weatherview.js";

const api = new MissionApi("");
let state: ViewState = initialState();
let record: MissionRecordDoc | null = null;
let plan: PlanDoc | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function fmtTime(t: number): string {
  return new Date(t * 1000).toISOString().replace(".000Z", "Z");
}

// -- mission list -------------------------------------------------------------

async function refreshMissions(): Promise<void> {
  const missions = await api.listMissions();
  const sel = el<HTMLSelectElement>("mission-select");
  sel.innerHTML = "";
  for (const m of missions) {
    const opt = document.createElement("option");
    opt.value = m.id;
    opt.textContent = `${m.id} · ${m.name} (${m.status}, ${m.n_plans} plans)`;
    sel.appendChild(opt);
  }
  if (missions.length && !state.missionId) {
    await selectMission(missions[0].id);
  }
}

async function selectMission(id: string): Promise<void> {
  record = await api.getMission(id);
  state = { ...state, missionId: id, planIndex: null, cursor: null };
  el<HTMLDivElement>("mission-status").textContent =
    `status: ${record.status} · weather: ` +
    record.weather_vintages.map((v) => v.ref).join(", ");
  const planSel = el<HTMLSelectElement>("plan-select");
  planSel.innerHTML = "";
  record.plans.forEach((p) => {
    const opt = document.createElement("option");
    opt.value = String(p.index);
    opt.textContent = `#${p.index} ${p.kind} · ${
      p.cancelled ? "cancelled" : `cost ${p.total_cost?.toFixed(0)}`
    }`;
    planSel.appendChild(opt);
  });
  if (record.plans.length) {
    await selectPlan(record.plans.length - 1);
  } else {
    plan = null;
    renderPlan();
  }
  await renderWeather();
}

async function selectPlan(index: number): Promise<void> {
  if (!record) return;
  plan = await api.getPlan(record.id, index);
  state = { ...state, planIndex: index, cursor: null };
  el<HTMLSelectElement>("plan-select").value = String(index);
  renderPlan();
}

// -- weather browser ------------------------------------------------------------

async function renderWeather(): Promise<void> {
  if (!record) return;
  const ref = record.weather_vintages[record.weather_vintages.length - 1].ref;
  const field = el<HTMLSelectElement>("weather-field").value;
  const time = Number(el<HTMLInputElement>("weather-time").value);
  const alt = Number(el<HTMLInputElement>("weather-alt").value);
  try {
    const slice = await api.weatherSlice(ref, field, time, alt);
    const canvas = el<HTMLCanvasElement>("weather-canvas");
    const { width, height, rgba } = rasterize(slice);
    canvas.width = width;
    canvas.height = height;
    const ctx = canvas.getContext("2d")!;
    const img = ctx.createImageData(width, height);
    img.data.set(rgba);
    ctx.putImageData(img, 0, 0);
    const [lo, hi] = valueRange(slice);
    const snapped =
      Math.abs(slice.time - time) > 1e-6 ? " (snapped to nearest step)" : "";
    el<HTMLDivElement>("weather-meta").textContent =
      `${slice.field} @ ${fmtTime(slice.time)}${snapped}` +
      (slice.alt !== null ? ` · ${slice.alt} m` : "") +
      ` · range [${lo.toFixed(1)}, ${hi.toFixed(1)}]`;
    if (field === "wind_east") {
      const north = await api.weatherSlice(ref, "wind_north", time, alt);
      drawWindVectors(canvas, slice, north);
    }
  } catch (err) {
    el<HTMLDivElement>("weather-meta").textContent = String(err);
  }
}

function drawWindVectors(
  canvas: HTMLCanvasElement,
  east: Parameters<typeof windVectors>[0],
  north: Parameters<typeof windVectors>[1]
): void {
  const ctx = canvas.getContext("2d")!;
  ctx.strokeStyle = "rgba(20,20,20,0.8)";
  const h = east.lats.length;
  const w = east.lons.length;
  for (const vec of windVectors(east, north, 2)) {
    const ix = east.lons.indexOf(vec.lon);
    const iy = east.lats.indexOf(vec.lat);
    const x = ix + 0.5;
    const y = h - 1 - iy + 0.5;
    ctx.beginPath();
    ctx.moveTo(x, y);
    ctx.lineTo(x + vec.u * 0.12, y - vec.v * 0.12);
    ctx.stroke();
  }
  void w;
}

// -- plan review --------------------------------------------------------------------

function renderPlan(): void {
  const map = el<SVGSVGElement & HTMLElement>("plan-map");
  const chartsDiv = el<HTMLDivElement>("plan-charts");
  map.innerHTML = "";
  chartsDiv.innerHTML = "";
  el<HTMLDivElement>("plan-meta").textContent = "";
  if (!plan) return;

  const width = 420;
  const height = 320;
  const pts = routeOf(plan);
  const project = projectLatLon(
    pts.map((p) => p[0]),
    pts.map((p) => p[1]),
    width - 20,
    height - 20
  );
  const path = pts
    .map((p, i) => {
      const [x, y] = project(p[0], p[1]);
      return `${i ? "L" : "M"}${(x + 10).toFixed(1)},${(y + 10).toFixed(1)}`;
    })
    .join("");
  map.setAttribute("viewBox", `0 0 ${width} ${height}`);
  map.innerHTML =
    `<path d="${path}" fill="none" stroke="#c62828" stroke-width="2"/>` +
    pts
      .map((p) => {
        const [x, y] = project(p[0], p[1]);
        return `<circle cx="${(x + 10).toFixed(1)}" cy="${(y + 10).toFixed(1)}" r="2" fill="#333"/>`;
      })
      .join("");

  const cancel = cancelMarker(plan);
  el<HTMLDivElement>("plan-meta").textContent =
    `duration ${(plan.duration_s / 3600).toFixed(2)} h · ` +
    `distance ${(plan.distance_m / 1000).toFixed(1)} km · min SoC ${(100 * plan.min_soc).toFixed(1)} %` +
    (cancel ? ` · CANCELLED by ${cancel.term} at ${fmtTime(cancel.time)}` : "");

  if (!plan.trace) return;
  const seriesList = [...reviewSeries(plan.trace), ...activeCostRateSeries(plan.trace)];
  for (const s of seriesList) {
    const d = document.createElement("div");
    d.className = "chart";
    const ext = extentOf(s.values);
    d.innerHTML =
      `<div class="chart-label">${s.label} [${ext.lo.toFixed(2)}, ${ext.hi.toFixed(2)}]</div>` +
      `<svg viewBox="0 0 420 60"><path d="${linePath(s.times, s.values, 420, 60)}"` +
      ` fill="none" stroke="#1565c0" stroke-width="1.2"/></svg>`;
    chartsDiv.appendChild(d);
  }

  map.onmousemove = (ev) => {
    if (!plan?.trace) return;
    const range = planTimeRange(plan);
    if (!range) return;
    const frac = ev.offsetX / map.clientWidth;
    state = setCursor(state, plan, range.lo + frac * (range.hi - range.lo));
    if (state.cursor !== null) {
      const i = nearestSampleIndex(plan.trace, state.cursor);
      const soc = traceSeries(plan.trace, "soc");
      el<HTMLDivElement>("plan-cursor").textContent =
        `t=${fmtTime(soc.times[i])} · SoC ${(100 * soc.values[i]).toFixed(1)} %`;
    }
  };
}

// -- launch-window explorer -------------------------------------------------------------

let sweep: SweepDoc | null = null;

async function runSweep(): Promise<void> {
  if (!record) return;
  const t0 = Number(el<HTMLInputElement>("lw-t0").value);
  const t1 = Number(el<HTMLInputElement>("lw-t1").value);
  const step = Number(el<HTMLInputElement>("lw-step").value);
  sweep = await api.launchWindow(record.id, t0, t1, step);
  renderSweep();
}

function renderSweep(): void {
  const host = el<HTMLDivElement>("lw-chart");
  host.innerHTML = "";
  if (!sweep) return;
  const s = sweepSeries(sweep);
  const best = highlightIndex(sweep);
  const ext = extentOf(s.costs);
  const xs = s.times;
  const exs = extentOf(xs);
  const w = 420;
  const h = 120;
  let dots = "";
  xs.forEach((t, i) => {
    const c = s.costs[i];
    if (c === null) return;
    const x = ((t - exs.lo) / (exs.hi - exs.lo)) * w;
    const y = h - ((c - ext.lo) / (ext.hi - ext.lo)) * h;
    const isBest = i === best;
    dots += `<circle data-index="${i}" cx="${x.toFixed(1)}" cy="${y.toFixed(1)}" r="${isBest ? 6 : 3.5}" fill="${isBest ? "#2e7d32" : "#1565c0"}"/>`;
  });
  host.innerHTML =
    `<svg viewBox="0 0 ${w} ${h}"><path d="${linePath(xs, s.costs, w, h)}" fill="none" stroke="#90a4ae"/>` +
    dots +
    `</svg>` +
    `<div>${best === null ? "no feasible departure" : `optimum: ${fmtTime(pickDeparture(sweep, best))}`}</div>`;
  host.querySelectorAll("circle").forEach((c) =>
    c.addEventListener("click", async () => {
      if (!record || !sweep) return;
      const idx = Number((c as SVGCircleElement).dataset.index);
      const res = await api.runPlan(record.id, {
        t_depart: pickDeparture(sweep, idx),
        background: true,
      });
      if (res.job) {
        const done = await api.pollJob(res.job);
        if (done.status === "done") {
          await selectMission(record.id);
          await selectPlan(done.result.plan_index);
        }
      }
    })
  );
}

// -- replan console ------------------------------------------------------------------------

async function submitReplan(): Promise<void> {
  if (!record || state.planIndex === null) return;
  const lat = Number(el<HTMLInputElement>("rp-lat").value);
  const lon = Number(el<HTMLInputElement>("rp-lon").value);
  const alt = Number(el<HTMLInputElement>("rp-alt").value);
  const t = Number(el<HTMLInputElement>("rp-time").value);
  const soc = Number(el<HTMLInputElement>("rp-soc").value);
  const problem = validStateInput(lat, lon, soc);
  const out = el<HTMLDivElement>("rp-result");
  if (problem) {
    out.textContent = problem;
    return;
  }
  const oldPlan = plan!;
  const res = await api.submitStateAndReplan(record.id, {
    timestamp: t,
    lat,
    lon,
    alt,
    soc,
  });
  const newPlan = await api.getPlan(record.id, res.plan_index);
  const diff = diffPlans(oldPlan, newPlan);
  const deltas = Object.entries(diff.termDeltas)
    .filter(([, v]) => v !== 0)
    .map(([k, v]) => `${k}: ${v >= 0 ? "+" : ""}${v.toFixed(1)}`)
    .join(" · ");
  out.textContent =
    `replanned as #${res.plan_index}: duration ${diff.durationDelta >= 0 ? "+" : ""}` +
    `${(diff.durationDelta / 3600).toFixed(2)} h · ` +
    `min SoC ${diff.minSocDelta >= 0 ? "+" : ""}${(100 * diff.minSocDelta).toFixed(1)} pts · ${deltas}`;
  await selectMission(record.id);
  await selectPlan(res.plan_index);
}

// -- wiring -----------------------------------------------------------------------------------

export function boot(): void {
  el<HTMLSelectElement>("mission-select").addEventListener("change", (e) =>
    selectMission((e.target as HTMLSelectElement).value)
  );
  el<HTMLSelectElement>("plan-select").addEventListener("change", (e) =>
    selectPlan(Number((e.target as HTMLSelectElement).value))
  );
  el<HTMLButtonElement>("weather-refresh").addEventListener("click", renderWeather);
  el<HTMLButtonElement>("lw-run").addEventListener("click", runSweep);
  el<HTMLButtonElement>("rp-submit").addEventListener("click", submitReplan);
  void refreshMissions();
}

if (typeof document !== "undefined" && document.getElementById("mission-select")) {
  boot();
}
