"""Normalized multi-term cost function and per-path accumulation.

Nine normalized terms (threshold alpha, hard limit beta, curvature epsilon)
plus a constant time-cost rate.  Inputs past beta on the dangerous side
cancel the whole path; swapping alpha > beta flips the dangerous direction.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import kernels as K

CANCEL = math.inf

TERM_NAMES = K.TERM_NAMES  # ("time", "soc", ..., "altitude_agl")
NORMALIZED_TERMS = TERM_NAMES[1:]


@dataclass(frozen=True)
class CostTermParams:
    alpha: float
    beta: float
    epsilon: float

    def __post_init__(self):
        if self.alpha == self.beta:
            raise ValueError("alpha and beta must differ")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


def normalized_cost(term: CostTermParams, x: float) -> float:
    """Eq.-style normalization: 0 below threshold, CANCEL at/past the limit."""
    v = K.normalized_cost(x, term.alpha, term.beta, term.epsilon)
    return CANCEL if v >= 2.0 else float(v)


@dataclass
class CostParams:
    c_time: float
    terms: dict[str, CostTermParams | None]
    name: str = ""
    _arrays: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        unknown = set(self.terms) - set(NORMALIZED_TERMS)
        if unknown:
            raise ValueError(f"unknown cost terms: {sorted(unknown)}")
        for t in NORMALIZED_TERMS:
            self.terms.setdefault(t, None)

    def enabled_terms(self) -> list[str]:
        return [t for t in NORMALIZED_TERMS if self.terms[t] is not None]

    def pack(self) -> tuple:
        """(c_time, alphas, betas, epss, enabled) kernel arrays, TERM_*-indexed."""
        if self._arrays is None:
            alphas = np.zeros(K.N_TERMS)
            betas = np.ones(K.N_TERMS)
            epss = np.ones(K.N_TERMS)
            enabled = np.zeros(K.N_TERMS)
            for i, name in enumerate(TERM_NAMES):
                if i == K.TERM_TIME:
                    continue
                tp = self.terms.get(name)
                if tp is None:
                    continue
                alphas[i] = tp.alpha
                betas[i] = tp.beta
                epss[i] = tp.epsilon
                enabled[i] = 1.0
            self._arrays = (float(self.c_time), alphas, betas, epss, enabled)
        return self._arrays

    def to_json(self) -> dict:
        d = {"name": self.name, "c_time": self.c_time, "terms": {}}
        for t in NORMALIZED_TERMS:
            tp = self.terms[t]
            d["terms"][t] = (
                None
                if tp is None
                else {"alpha": tp.alpha, "beta": tp.beta, "epsilon": tp.epsilon}
            )
        return d

    @classmethod
    def from_json(cls, d: dict) -> "CostParams":
        terms: dict[str, CostTermParams | None] = {}
        for t, v in d.get("terms", {}).items():
            terms[t] = None if v is None else CostTermParams(**v)
        return cls(c_time=float(d["c_time"]), terms=terms, name=d.get("name", ""))


def load_cost_params(source: str | Path | dict) -> CostParams:
    """Cost params from a JSON file, dict, or bundled preset
    ('81h', 'atlantic', 'arctic')."""
    if isinstance(source, dict):
        return CostParams.from_json(source)
    p = Path(source)
    if p.exists():
        return CostParams.from_json(json.loads(p.read_text()))
    name = str(source).lower()
    res = resources.files("helios.data").joinpath(f"cost_{name}.json")
    if res.is_file():
        return CostParams.from_json(json.loads(res.read_text()))
    raise FileNotFoundError(f"no cost parameter file: {source}")


def save_cost_params(path: str | Path, cp: CostParams) -> None:
    Path(path).write_text(json.dumps(cp.to_json(), indent=2, sort_keys=True))


@dataclass
class CostBreakdown:
    terms: dict[str, float]
    max_inputs: dict[str, float]
    cancelled: bool = False
    cancel_term: str | None = None

    @property
    def total(self) -> float:
        return CANCEL if self.cancelled else float(sum(self.terms.values()))

    def to_json(self) -> dict:
        return {
            "terms": {k: float(v) for k, v in self.terms.items()},
            "total": None if self.cancelled else self.total,
            "max_inputs": {k: float(v) for k, v in self.max_inputs.items()},
            "cancelled": self.cancelled,
            "cancel_term": self.cancel_term,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CostBreakdown":
        return cls(
            terms=dict(d["terms"]),
            max_inputs=dict(d.get("max_inputs", {})),
            cancelled=d.get("cancelled", False),
            cancel_term=d.get("cancel_term"),
        )

    @classmethod
    def from_arrays(cls, integrals, max_inputs, cancelled, cancel_term) -> "CostBreakdown":
        return cls(
            terms={n: float(integrals[i]) for i, n in enumerate(TERM_NAMES)},
            max_inputs={
                n: float(max_inputs[i])
                for i, n in enumerate(TERM_NAMES)
                if max_inputs[i] > -1e300
            },
            cancelled=cancelled,
            cancel_term=cancel_term,
        )


def instantaneous_costs(cp: CostParams, inputs: dict[str, float]) -> dict[str, float]:
    """Per-term cost rates for one instant; CANCEL (inf) marks a limit breach.

    `inputs` maps every enabled normalized term to its current physical value
    (soc, radiation_factor, excess_power, cape, wind, gust, precipitation,
    humidity, altitude_agl).
    """
    rates = {"time": cp.c_time}
    for name in NORMALIZED_TERMS:
        tp = cp.terms[name]
        if tp is None:
            rates[name] = 0.0
            continue
        if name not in inputs:
            raise KeyError(f"missing input for enabled cost term '{name}'")
        rates[name] = normalized_cost(tp, inputs[name])
    return rates


def trace_inputs(trace, i: int) -> dict[str, float]:
    """Cost-term inputs for step i of a SegmentTrace (derived inputs are
    recorded by the simulator alongside the raw weather sample)."""
    row = trace.data[i]
    we = row[K.TR_SAMPLE0 + K.S_WE]
    wn = row[K.TR_SAMPLE0 + K.S_WN]
    return {
        "soc": float(row[K.TR_SOC]),
        "radiation_factor": float(row[K.TR_RADFACTOR]),
        "excess_power": float(row[K.TR_EXCESS]),
        "cape": float(row[K.TR_SAMPLE0 + K.S_CAPE]),
        "wind": float(math.hypot(we, wn)),
        "gust": float(row[K.TR_SAMPLE0 + K.S_GUST]),
        "precipitation": float(row[K.TR_SAMPLE0 + K.S_PRECIP]),
        "humidity": float(row[K.TR_SAMPLE0 + K.S_HUM]),
        "altitude_agl": float(row[K.TR_AGL]),
    }


def accumulate(cp: CostParams, trace) -> CostBreakdown:
    """Rectangle-rule integral of the per-term rates over a SegmentTrace.

    Recomputes rates from the recorded states (independent of the fused
    kernel's own integration), so it doubles as a cross-check of the kernel.
    """
    totals = {n: 0.0 for n in TERM_NAMES}
    max_inputs: dict[str, float] = {}
    dts = trace.step_lengths()
    for i in range(trace.n_samples):
        inputs = trace_inputs(trace, i)
        rates = instantaneous_costs(cp, inputs)
        for name, x in inputs.items():
            if name not in max_inputs or x > max_inputs[name]:
                max_inputs[name] = x
        for name, r in rates.items():
            if math.isinf(r):
                return CostBreakdown(
                    terms=totals,
                    max_inputs=max_inputs,
                    cancelled=True,
                    cancel_term=name,
                )
            totals[name] += r * float(dts[i])
    cancelled = not trace.feasible and trace.cancel_term is not None
    return CostBreakdown(
        terms=totals,
        max_inputs=max_inputs,
        cancelled=cancelled,
        cancel_term=trace.cancel_term,
    )
