#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-NumPy/Python fallback.

Runs a representative planning workload (weather interpolation and full
segment integrations) in the current dispatch mode, then re-executes itself
with HELIOS_NO_NUMBA=1 to time the fallback, and prints the comparison.

Usage: python3 benchmarks/bench_kernels.py [n_segments]
"""
import json
import os
import subprocess
import sys
import time

import numpy as np


def workload(n_segments: int) -> dict:
    import calendar

    from helios import kernels as K
    from helios.aircraft import AircraftState, Environment, load_aircraft, simulate_segment
    from helios.cost import load_cost_params
    from helios.environment import synth_weather
    from helios.geo import GeoPoint, destination_point

    t0 = calendar.timegm((2015, 12, 14, 18, 0, 0))
    spec = {
        "lat": {"start": 46.0, "stop": 48.0, "n": 9},
        "lon": {"start": 6.5, "stop": 10.5, "n": 13},
        "altitudes": [400.0, 800.0],
        "time": {"start": t0, "hours": 30, "step_s": 3600.0},
        "seed": 1,
        "layers": [{"kind": "random", "wind_std": 2.0}],
    }
    env = Environment(weather=synth_weather(spec))
    params = load_aircraft("as2")
    cp = load_cost_params("81h")
    rng = np.random.default_rng(0)

    # warm-up: trigger compilation outside the timed region
    start = AircraftState(
        position=GeoPoint(47.0, 7.2, 400.0), time=t0 + 7200, soc=0.8, v_air=9.7
    )
    blat, blon = destination_point(47.0, 7.2, 90.0, 30e3)
    simulate_segment(params, start, GeoPoint(blat, blon, 400.0), env, cp)

    tic = time.perf_counter()
    steps = 0
    for _ in range(n_segments):
        lat = float(rng.uniform(46.6, 47.4))
        lon = float(rng.uniform(7.2, 9.8))
        bearing = float(rng.uniform(0, 360))
        dist = float(rng.uniform(15e3, 45e3))
        blat, blon = destination_point(lat, lon, bearing, dist)
        if not (46.2 < blat < 47.8 and 6.7 < blon < 10.3):
            continue
        st = AircraftState(
            position=GeoPoint(lat, lon, 400.0), time=t0 + 7200, soc=0.8, v_air=9.7
        )
        tr = simulate_segment(params, st, GeoPoint(blat, blon, 800.0), env, cp)
        steps += tr.n_samples
    seg_time = time.perf_counter() - tic

    wt, wa, wla, wlo, wstep, f3, f2 = env.weather.pack()
    out = np.zeros(K.N_SAMPLE)
    tic = time.perf_counter()
    n_interp = 20000
    for i in range(n_interp):
        K.sample_weather(
            wt, wa, wla, wlo, f3, f2,
            46.5 + 0.9 * ((i * 7) % 100) / 100.0,
            7.0 + 2.9 * ((i * 13) % 100) / 100.0,
            500.0,
            t0 + 7200.0 + (i % 96) * 900.0,
            out,
        )
    interp_time = time.perf_counter() - tic

    return {
        "jit": K.USE_NUMBA,
        "segments": n_segments,
        "segment_seconds": seg_time,
        "integration_steps": steps,
        "interp_calls": n_interp,
        "interp_seconds": interp_time,
    }


def main():
    n_segments = int(sys.argv[1]) if len(sys.argv) > 1 else 500
    mine = workload(n_segments)
    print(json.dumps(mine))
    if os.environ.get("HELIOS_BENCH_CHILD"):
        return
    env = dict(os.environ)
    env["HELIOS_NO_NUMBA"] = "1"
    env["HELIOS_BENCH_CHILD"] = "1"
    child_n = max(20, n_segments // 10)  # the fallback is far slower
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), str(child_n)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    other = json.loads(out.stdout.strip().splitlines()[-1])

    def per_seg(r):
        return r["segment_seconds"] / max(1, r["segments"])

    def per_interp(r):
        return r["interp_seconds"] / r["interp_calls"]

    fast, slow = (mine, other) if mine["jit"] else (other, mine)
    print()
    print(f"{'path':<12} {'seg [ms]':>10} {'interp [us]':>12}")
    for r, name in ((fast, "numba"), (slow, "numpy")):
        print(
            f"{name:<12} {1e3 * per_seg(r):>10.3f} {1e6 * per_interp(r):>12.2f}"
        )
    print(
        f"\nspeedup: segments x{per_seg(slow) / per_seg(fast):.0f}, "
        f"interpolation x{per_interp(slow) / per_interp(fast):.0f}"
    )


if __name__ == "__main__":
    main()
