"""Lookup-table decoding and the p_code benchmark sweep.

The decoder compares, per 9-bit readout key, the conditional outcome
probabilities given encoded logical |0> and |1>, and picks the more
likely preparation.  p_code is the total probability (under encoded
|0>) of outcomes that decode wrongly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .backends import RESULT_KEY_BITS, RunConfig, SyndromeDistribution, run
from .channels import KrausChannel, gate_infidelity
from .gates import (
    CNOT,
    FloatingGateParams,
    LdivParams,
    floating_cnot,
    ideal_cnot_channel,
    ldiv_noisy_cnot,
)

TIE_TOLERANCE = 1e-12
BOOTSTRAP_RESAMPLES = 100

GATE_FAMILIES = ("v1", "v2", "ldiv", "ldiv_no_k2", "ideal")

# (param1_name, param2_name) and default open-interval sweep bounds
GATE_PARAMS: dict[str, tuple[tuple[str, float, float], tuple[str, float, float]]] = {
    "v1": (("R", 30.0, 35.0), ("gamma", 0.0, 1.0)),
    "v2": (("R", 30.0, 35.0), ("gamma", 0.0, 1.0)),
    "ldiv": (("t", 1.0, 1.1), ("Gamma", 0.007, 0.027)),
    "ldiv_no_k2": (("t", 1.0, 1.1), ("Gamma", 0.007, 0.027)),
    "ideal": (("", 0.0, 0.0), ("", 0.0, 0.0)),
}

LDIV_DELTA = -0.0145

# per-gate preset preparation-noise strengths
P_INIT_PRESETS = {
    "v1": (0.0, 0.002, 0.07),
    "v2": (0.0, 0.007, 0.014),
    "ldiv": (0.0, 0.003, 0.007),
    "ldiv_no_k2": (0.0, 0.003, 0.007),
    "ideal": (0.0,),
}


def build_gate_channel(gate: str, param1: float, param2: float) -> KrausChannel:
    """Construct the CNOT channel for one grid point of a gate family."""
    if gate in ("v1", "v2"):
        return floating_cnot(FloatingGateParams(R=param1, gamma_ratio=param2, variant=gate))
    if gate in ("ldiv", "ldiv_no_k2"):
        return ldiv_noisy_cnot(
            LdivParams(t=param1, gamma=param2, delta=LDIV_DELTA, include_k2=(gate == "ldiv"))
        )
    if gate == "ideal":
        return ideal_cnot_channel()
    raise ValueError(f"unknown gate family {gate!r}")


def open_linspace(lo: float, hi: float, n: int) -> np.ndarray:
    """n points strictly inside (lo, hi), evenly spaced."""
    return lo + (hi - lo) * (np.arange(1, n + 1) / (n + 1))


@dataclass
class LookupTable:
    """Conditional readout-key probabilities for encoded |0> and |1>."""

    p0: dict[int, float]
    p1: dict[int, float]

    def validate(self, tolerance: float = 1e-9) -> None:
        for name, dist in (("p0", self.p0), ("p1", self.p1)):
            total = sum(dist.values())
            if abs(total - 1.0) > tolerance:
                raise ValueError(f"{name} conditionals sum to {total}, not 1")

    def keys(self) -> list[int]:
        return sorted(set(self.p0) | set(self.p1))


@dataclass(frozen=True)
class BenchmarkRecord:
    gate: str
    scenario: str
    param1_name: str
    param1: float
    param2_name: str
    param2: float
    p_init: float
    infidelity: float
    p_code: float
    p_code_stderr: float
    backend: str
    n_samples: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.p_code <= 1.0:
            raise ValueError(f"p_code {self.p_code} outside [0, 1]")


def build_table(dist0: SyndromeDistribution, dist1: SyndromeDistribution) -> LookupTable:
    keys = set(dist0.probabilities) | set(dist1.probabilities)
    p0 = {k: dist0.probabilities.get(k, 0.0) for k in keys}
    p1 = {k: dist1.probabilities.get(k, 0.0) for k in keys}
    n0 = sum(p0.values())
    n1 = sum(p1.values())
    if n0 <= 0 or n1 <= 0:
        raise ValueError("empty syndrome distribution")
    return LookupTable(
        p0={k: v / n0 for k, v in p0.items()},
        p1={k: v / n1 for k, v in p1.items()},
    )


def logical_error_probability(table: LookupTable, encoded: int) -> float:
    """Probability the maximum-likelihood decoder reports the wrong state.

    Exact ties decode by a fair coin, contributing half their weight.
    """
    if encoded not in (0, 1):
        raise ValueError("encoded must be 0 or 1")
    own = table.p0 if encoded == 0 else table.p1
    other = table.p1 if encoded == 0 else table.p0
    p_err = 0.0
    for key in table.keys():
        a = own.get(key, 0.0)
        b = other.get(key, 0.0)
        if abs(a - b) < TIE_TOLERANCE:
            p_err += a / 2.0
        elif b > a:
            p_err += a
    return p_err


def _bootstrap_stderr(
    dist0: SyndromeDistribution,
    dist1: SyndromeDistribution,
    encoded: int,
    seed: int,
    n_resamples: int = BOOTSTRAP_RESAMPLES,
) -> float:
    """Bootstrap stderr of p_code by multinomial resampling of sampled dists."""
    if dist0.n_samples == 0 and dist1.n_samples == 0:
        return 0.0
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0xB007], dtype=np.uint64)))
    values = []
    for _ in range(n_resamples):
        resampled = []
        for dist in (dist0, dist1):
            if dist.n_samples == 0:
                resampled.append(dist)
                continue
            keys = sorted(dist.probabilities)
            probs = np.array([dist.probabilities[k] for k in keys])
            probs = probs / probs.sum()
            counts = rng.multinomial(dist.n_samples, probs)
            new = {
                k: c / dist.n_samples for k, c in zip(keys, counts) if c > 0
            }
            resampled.append(
                SyndromeDistribution(new, dict.fromkeys(new, 0.0), dist.n_samples)
            )
        values.append(logical_error_probability(build_table(*resampled), encoded))
    return float(np.std(values, ddof=1))


@dataclass(frozen=True)
class SweepSpec:
    """One benchmark sweep: a gate family over its 2-d parameter grid."""

    gate: str
    scenario: str
    grid_shape: tuple[int, int] = (16, 16)
    p_init_values: tuple[float, ...] = ()
    backend: str = "exact_dm"
    n_samples: int = 0
    seed: int = 0
    serialization: str = "serialized"
    threads: int = 1
    param1_bounds: tuple[float, float] | None = None
    param2_bounds: tuple[float, float] | None = None

    def __post_init__(self):
        if self.gate not in GATE_FAMILIES:
            raise ValueError(f"unknown gate family {self.gate!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def effective_p_inits(self) -> tuple[float, ...]:
        return self.p_init_values or P_INIT_PRESETS[self.gate]

    def grid_points(self) -> list[tuple[float, float]]:
        if self.gate == "ideal":
            return [(0.0, 0.0)]
        (n1_name, lo1, hi1), (n2_name, lo2, hi2) = GATE_PARAMS[self.gate]
        if self.param1_bounds:
            lo1, hi1 = self.param1_bounds
        if self.param2_bounds:
            lo2, hi2 = self.param2_bounds
        p1s = open_linspace(lo1, hi1, self.grid_shape[0])
        p2s = open_linspace(lo2, hi2, self.grid_shape[1])
        return [(float(a), float(b)) for a in p1s for b in p2s]


def _point_seed(master: int, point_index: int, p_index: int, encoded: int) -> int:
    ss = np.random.SeedSequence((master, point_index, p_index, encoded))
    return int(ss.generate_state(1, np.uint64)[0])


def _benchmark_point(
    spec: SweepSpec, point_index: int, params: tuple[float, float], p_index: int, p_init: float
) -> BenchmarkRecord:
    param1, param2 = params
    channel = build_gate_channel(spec.gate, param1, param2)
    infidelity = gate_infidelity(channel, CNOT)
    dists = []
    for encoded in (0, 1):
        cfg = RunConfig(
            scenario=spec.scenario,
            cnot=channel,
            p_init=p_init,
            backend=spec.backend,
            n_samples=spec.n_samples if spec.backend == "trajectory" else 0,
            seed=_point_seed(spec.seed, point_index, p_index, encoded),
            serialization=spec.serialization,
            encoded=encoded,
        )
        dists.append(run(cfg))
    table = build_table(dists[0], dists[1])
    p_code = logical_error_probability(table, encoded=0)
    stderr = _bootstrap_stderr(
        dists[0], dists[1], encoded=0, seed=_point_seed(spec.seed, point_index, p_index, 2)
    )
    (p1n, _, _), (p2n, _, _) = GATE_PARAMS[spec.gate]
    return BenchmarkRecord(
        gate=spec.gate,
        scenario=spec.scenario,
        param1_name=p1n,
        param1=param1,
        param2_name=p2n,
        param2=param2,
        p_init=p_init,
        infidelity=infidelity,
        p_code=p_code,
        p_code_stderr=stderr,
        backend=spec.backend,
        n_samples=spec.n_samples if spec.backend == "trajectory" else 0,
        seed=spec.seed,
    )


def run_benchmark(spec: SweepSpec) -> list[BenchmarkRecord]:
    """Run the sweep; records come back in deterministic grid order."""
    points = spec.grid_points()
    tasks = [
        (i, params, j, p_init)
        for j, p_init in enumerate(spec.effective_p_inits())
        for i, params in enumerate(points)
    ]

    def work(task):
        i, params, j, p_init = task
        try:
            return _benchmark_point(spec, i, params, j, p_init)
        except Exception as exc:
            raise RuntimeError(
                f"grid point {i} ({spec.gate}, params={params}, p_init={p_init}) failed"
            ) from exc

    if spec.threads == 1:
        return [work(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=spec.threads) as pool:
        return list(pool.map(work, tasks))


# --- sweep statistics helpers ---------------------------------------------------


def matched_infidelity_bins(
    records: list[BenchmarkRecord], n_bins: int = 20, min_points: int = 3
) -> list[list[BenchmarkRecord]]:
    """Group records into equal-width log-infidelity bins with >= min_points."""
    usable = [r for r in records if r.infidelity > 0 and r.p_code > 0]
    if not usable:
        return []
    logs = np.log10([r.infidelity for r in usable])
    lo, hi = float(logs.min()), float(logs.max())
    if hi <= lo:
        return [usable] if len(usable) >= min_points else []
    edges = np.linspace(lo, hi, n_bins + 1)
    bins: list[list[BenchmarkRecord]] = [[] for _ in range(n_bins)]
    for r, lg in zip(usable, logs):
        idx = min(int((lg - lo) / (hi - lo) * n_bins), n_bins - 1)
        bins[idx].append(r)
    return [b for b in bins if len(b) >= min_points]


def max_bin_spread(
    records: list[BenchmarkRecord], n_bins: int = 20, min_p_code: float = 0.0
) -> float:
    """Largest max/min p_code ratio over matched-infidelity bins.

    Bins containing any point with p_code < min_p_code are skipped; for
    sampled backends a ratio against a poorly-resolved denominator measures
    shot noise rather than spread.
    """
    spreads = [
        max(r.p_code for r in b) / min(r.p_code for r in b)
        for b in matched_infidelity_bins(records, n_bins)
        if min(r.p_code for r in b) >= min_p_code
    ]
    return max(spreads, default=0.0)


def loglog_slope(records: list[BenchmarkRecord]) -> tuple[float, float]:
    """Least-squares slope (and stderr) of log10 p_code vs log10 infidelity."""
    usable = [r for r in records if r.infidelity > 0 and r.p_code > 0]
    if len(usable) < 3:
        raise ValueError("need at least 3 positive points for a slope fit")
    x = np.log10([r.infidelity for r in usable])
    y = np.log10([r.p_code for r in usable])
    coeffs, cov = np.polyfit(x, y, 1, cov=True)
    return float(coeffs[0]), float(np.sqrt(cov[0, 0]))


def benchmark_floor(
    scenario: str,
    p_init: float,
    backend: str = "exact_dm",
    n_samples: int = 0,
    seed: int = 0,
    serialization: str = "serialized",
) -> float:
    """p_code of the ideal CNOT at the given p_init: the preparation-noise floor."""
    dists = []
    for encoded in (0, 1):
        cfg = RunConfig(
            scenario=scenario,
            cnot=None,
            p_init=p_init,
            backend=backend,
            n_samples=n_samples,
            seed=seed,
            serialization=serialization,
            encoded=encoded,
        )
        dists.append(run(cfg))
    return logical_error_probability(build_table(*dists), 0)


def excess_loglog_slope(
    records: list[BenchmarkRecord], floor: float, n_bins: int = 20
) -> tuple[float, float]:
    """Slope of log10 (p_code - floor) vs log10 infidelity over bin medians.

    Subtracting the gate-independent preparation-noise floor isolates the
    gate-noise contribution, and fitting bin medians keeps the large
    point-to-point spread at matched infidelity from dominating the fit.
    """
    usable = [r for r in records if r.infidelity > 0 and r.p_code > floor]
    if len(usable) < 3:
        raise ValueError("need at least 3 points above the floor for a slope fit")
    logs = np.log10([r.infidelity for r in usable])
    lo, hi = float(logs.min()), float(logs.max())
    if hi <= lo:
        raise ValueError("records span no infidelity range")
    xs, ys = [], []
    for b in range(n_bins):
        sel = [
            r
            for r, lg in zip(usable, logs)
            if b == min(int((lg - lo) / (hi - lo) * n_bins), n_bins - 1)
        ]
        if not sel:
            continue
        xs.append(np.median([r.infidelity for r in sel]))
        ys.append(np.median([r.p_code - floor for r in sel]))
    if len(xs) < 3:
        raise ValueError("need at least 3 populated bins for a slope fit")
    coeffs, cov = np.polyfit(np.log10(xs), np.log10(ys), 1, cov=True)
    return float(coeffs[0]), float(np.sqrt(cov[0, 0]))


def linear_slope(records: list[BenchmarkRecord]) -> tuple[float, float]:
    """Least-squares slope (and stderr) of p_code vs infidelity, linear axes."""
    usable = [r for r in records if r.infidelity >= 0]
    x = np.array([r.infidelity for r in usable])
    y = np.array([r.p_code for r in usable])
    coeffs, cov = np.polyfit(x, y, 1, cov=True)
    return float(coeffs[0]), float(np.sqrt(cov[0, 0]))
